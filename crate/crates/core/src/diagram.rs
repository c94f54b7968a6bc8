//! Long-knot diagrams: parsing and rendering of the KDT text format,
//! structural validation, Seifert circles, writhe/rotation statistics and
//! mirroring.
//!
//! A diagram with `r+1` crossings has arcs `a_1..a_{r+1}` numbered along the
//! orientation so that arc `a_i` ends (goes under) at crossing `i`; the last
//! arc `a_{r+1}` is the special (starred) arc. Each arc `j` carries the list
//! of crossings it passes over (`over_order`, in travel order) and one
//! rotation-cocycle integer per partarc. Rotation data is fixture input; it
//! is validated by the Seifert-circle rule (every circle sums to +1 or -1)
//! and cross-checked by the invariant oracles downstream.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("validation failed:\n{}", .0.join("\n"))]
    Validation(Vec<String>),
}

/// A partarc: piece `idx` of arc `arc` (0-based within the arc).
pub type Partarc = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub name: String,
    /// number of crossings, `r+1` (0 for the trivial unknot diagram)
    pub n_cross: usize,
    /// sign per crossing, 1-based index `i-1`
    pub sign: Vec<i8>,
    /// over-arc per crossing
    pub over: Vec<usize>,
    /// crossings passed over by each arc, in travel order
    pub over_order: Vec<Vec<usize>>,
    /// rotation-cocycle value per partarc of each arc (`len = over_order.len() + 1`)
    pub partarc_rot: Vec<Vec<i64>>,
}

#[derive(Debug, Clone)]
pub struct SeifertCircles {
    /// each circle as a cycle of partarcs
    pub circles: Vec<Vec<Partarc>>,
    /// rotation number of each circle (sum of its partarc cocycle values)
    pub rot: Vec<i64>,
    /// index of the circle containing the last partarc of the special arc
    pub special_index: usize,
}

/// Writhe, rotation number and exponent statistics of a validated diagram.
///
/// `delta_half(n)` is twice the exponent `delta(K,n) = n*(rot_k - omega)/2`
/// used as the global prefactor of the colored invariants. `rot_k` is the
/// plain sum of the rotation numbers of the non-special Seifert circles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagramStats {
    pub omega: i64,
    pub rot_k: i64,
}

impl DiagramStats {
    /// Twice `delta(K, n)`; always an integer.
    pub fn delta_half(&self, n: u32) -> i64 {
        n as i64 * (self.rot_k - self.omega)
    }
}

impl Diagram {
    pub fn arcs(&self) -> usize {
        if self.n_cross == 0 {
            1
        } else {
            self.n_cross
        }
    }

    /// Number of partarcs of arc `j` (1-based).
    pub fn partarcs_of(&self, j: usize) -> usize {
        self.partarc_rot[j - 1].len()
    }

    pub fn all_partarcs(&self) -> Vec<Partarc> {
        let mut v = Vec::new();
        for j in 1..=self.arcs() {
            for k in 0..self.partarcs_of(j) {
                v.push((j, k));
            }
        }
        v
    }

    pub fn rot_of(&self, pa: Partarc) -> i64 {
        self.partarc_rot[pa.0 - 1][pa.1]
    }

    /// Sum of the rotation cocycle over all partarcs of arc `j`.
    pub fn arc_rot_total(&self, j: usize) -> i64 {
        self.partarc_rot[j - 1].iter().sum()
    }

    /// Sum of the rotation cocycle over the partarcs of arc `j = over(i)`
    /// from crossing `i` to the end of the arc.
    pub fn rot_red(&self, i: usize) -> i64 {
        let j = self.over[i - 1];
        let k = self.over_order[j - 1]
            .iter()
            .position(|&c| c == i)
            .expect("crossing missing from over_order")
            + 1;
        self.partarc_rot[j - 1][k..].iter().sum()
    }

    /// The four partarcs meeting at crossing `i`:
    /// `(in_over, in_under, out_over, out_under)`.
    pub fn crossing_slots(&self, i: usize) -> (Partarc, Partarc, Partarc, Partarc) {
        let n = self.n_cross;
        let j = self.over[i - 1];
        let k = self.over_order[j - 1]
            .iter()
            .position(|&c| c == i)
            .expect("crossing missing from over_order")
            + 1;
        let in_under = (i, self.partarcs_of(i) - 1);
        let out_under = (i % n + 1, 0);
        ((j, k - 1), in_under, (j, k), out_under)
    }

    /// Oriented smoothing at every crossing; each incoming strand is joined
    /// to the other strand's outgoing end.
    pub fn seifert_circles(&self) -> SeifertCircles {
        if self.n_cross == 0 {
            return SeifertCircles {
                circles: vec![vec![(1, 0)]],
                rot: vec![self.partarc_rot[0][0]],
                special_index: 0,
            };
        }
        let mut succ = std::collections::HashMap::new();
        for i in 1..=self.n_cross {
            let (io, iu, oo, ou) = self.crossing_slots(i);
            succ.insert(io, ou);
            succ.insert(iu, oo);
        }
        let mut circles = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for pa in self.all_partarcs() {
            if seen.contains(&pa) {
                continue;
            }
            let mut cyc = Vec::new();
            let mut cur = pa;
            while seen.insert(cur) {
                cyc.push(cur);
                cur = succ[&cur];
            }
            circles.push(cyc);
        }
        let rot: Vec<i64> = circles
            .iter()
            .map(|c| c.iter().map(|&p| self.rot_of(p)).sum())
            .collect();
        let star = (self.n_cross, self.partarcs_of(self.n_cross) - 1);
        let special_index = circles
            .iter()
            .position(|c| c.contains(&star))
            .expect("special partarc not on any circle");
        SeifertCircles {
            circles,
            rot,
            special_index,
        }
    }

    /// Check every structural invariant; collect all violations.
    pub fn validate(&self) -> Result<SeifertCircles, DiagramError> {
        let mut errs = Vec::new();
        let n = self.n_cross;
        if n == 0 {
            if self.partarc_rot.len() != 1 || self.partarc_rot[0].len() != 1 {
                errs.push("0-crossing diagram must have one arc with one partarc".into());
            } else if self.partarc_rot[0][0].abs() != 1 {
                errs.push(format!(
                    "unknot circle rotation must be +1 or -1, got {}",
                    self.partarc_rot[0][0]
                ));
            }
            if !errs.is_empty() {
                return Err(DiagramError::Validation(errs));
            }
            return Ok(self.seifert_circles());
        }
        for (i, &v) in self.over.iter().enumerate() {
            let i1 = i + 1;
            if v < 1 || v > n {
                errs.push(format!("over({i1}) = {v} out of range"));
            }
            if v == i1 || v == i1 % n + 1 {
                errs.push(format!("kink: over({i1}) = {v}"));
            }
        }
        // over_order(j) must be a permutation of {i : over(i) = j}
        for j in 1..=n {
            let mut expect: Vec<usize> = (1..=n).filter(|&i| self.over[i - 1] == j).collect();
            let mut got = self.over_order[j - 1].clone();
            expect.sort_unstable();
            got.sort_unstable();
            if expect != got {
                errs.push(format!(
                    "overorder {j} is not a permutation of the crossings over arc {j}"
                ));
            }
            if self.partarc_rot[j - 1].len() != self.over_order[j - 1].len() + 1 {
                errs.push(format!(
                    "rot {j}: expected {} values, got {}",
                    self.over_order[j - 1].len() + 1,
                    self.partarc_rot[j - 1].len()
                ));
            }
        }
        if !errs.is_empty() {
            return Err(DiagramError::Validation(errs));
        }
        let sc = self.seifert_circles();
        for (ci, r) in sc.rot.iter().enumerate() {
            if r.abs() != 1 {
                errs.push(format!(
                    "Seifert circle {ci} has rotation {r}, expected +1 or -1"
                ));
            }
        }
        if errs.is_empty() {
            Ok(sc)
        } else {
            Err(DiagramError::Validation(errs))
        }
    }

    /// Writhe and rotation statistics (the diagram must be valid).
    pub fn stats(&self) -> DiagramStats {
        let omega = self.sign.iter().map(|&s| s as i64).sum();
        let sc = self.seifert_circles();
        let rot_k = sc
            .rot
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != sc.special_index)
            .map(|(_, r)| r)
            .sum();
        DiagramStats { omega, rot_k }
    }

    /// Flip all crossing signs and negate all rotation data.
    pub fn mirror(&self) -> Diagram {
        Diagram {
            name: format!("{}_mirror", self.name),
            n_cross: self.n_cross,
            sign: self.sign.iter().map(|s| -s).collect(),
            over: self.over.clone(),
            over_order: self.over_order.clone(),
            partarc_rot: self
                .partarc_rot
                .iter()
                .map(|v| v.iter().map(|x| -x).collect())
                .collect(),
        }
    }

    // ---------------------------------------------------------------------
    // KDT text format
    // ---------------------------------------------------------------------

    pub fn parse_kdt(text: &str) -> Result<Diagram, DiagramError> {
        let err = |line: usize, msg: String| DiagramError::Parse { line, msg };
        let mut name = None;
        let mut ncross: Option<usize> = None;
        let mut sign: Vec<Option<i8>> = Vec::new();
        let mut over: Vec<Option<usize>> = Vec::new();
        let mut over_order: Vec<Option<Vec<usize>>> = Vec::new();
        let mut rot: Vec<Option<Vec<i64>>> = Vec::new();
        let mut arcs = 0usize;

        for (lno, raw) in text.lines().enumerate() {
            let lno = lno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let key = it.next().unwrap();
            let rest: Vec<&str> = it.collect();
            match key {
                "knot" => {
                    if name.is_some() {
                        return Err(err(lno, "duplicate `knot` line".into()));
                    }
                    name = Some(rest.join(" "));
                }
                "crossings" => {
                    if ncross.is_some() {
                        return Err(err(lno, "duplicate `crossings` line".into()));
                    }
                    let n: usize = rest
                        .first()
                        .ok_or_else(|| err(lno, "missing crossing count".into()))?
                        .parse()
                        .map_err(|_| err(lno, "bad crossing count".into()))?;
                    ncross = Some(n);
                    arcs = if n == 0 { 1 } else { n };
                    sign = vec![None; n];
                    over = vec![None; n];
                    over_order = vec![None; arcs];
                    rot = vec![None; arcs];
                }
                "sign" | "over" | "overorder" | "rot" => {
                    let n =
                        ncross.ok_or_else(|| err(lno, "`crossings` must come first".into()))?;
                    let idx: usize = rest
                        .first()
                        .ok_or_else(|| err(lno, "missing index".into()))?
                        .parse()
                        .map_err(|_| err(lno, "bad index".into()))?;
                    match key {
                        "sign" => {
                            if idx < 1 || idx > n {
                                return Err(err(lno, format!("sign index {idx} out of range")));
                            }
                            if sign[idx - 1].is_some() {
                                return Err(err(lno, format!("duplicate `sign {idx}`")));
                            }
                            let s = match rest.get(1) {
                                Some(&"+") => 1,
                                Some(&"-") => -1,
                                _ => return Err(err(lno, "sign must be + or -".into())),
                            };
                            sign[idx - 1] = Some(s);
                        }
                        "over" => {
                            if idx < 1 || idx > n {
                                return Err(err(lno, format!("over index {idx} out of range")));
                            }
                            if over[idx - 1].is_some() {
                                return Err(err(lno, format!("duplicate `over {idx}`")));
                            }
                            let v: usize = rest
                                .get(1)
                                .ok_or_else(|| err(lno, "missing over arc".into()))?
                                .parse()
                                .map_err(|_| err(lno, "bad over arc".into()))?;
                            over[idx - 1] = Some(v);
                        }
                        "overorder" => {
                            if idx < 1 || idx > arcs {
                                return Err(err(lno, format!("arc index {idx} out of range")));
                            }
                            if over_order[idx - 1].is_some() {
                                return Err(err(lno, format!("duplicate `overorder {idx}`")));
                            }
                            let xs: Result<Vec<usize>, _> =
                                rest[1..].iter().map(|s| s.parse()).collect();
                            over_order[idx - 1] =
                                Some(xs.map_err(|_| err(lno, "bad crossing list".into()))?);
                        }
                        "rot" => {
                            if idx < 1 || idx > arcs {
                                return Err(err(lno, format!("arc index {idx} out of range")));
                            }
                            if rot[idx - 1].is_some() {
                                return Err(err(lno, format!("duplicate `rot {idx}`")));
                            }
                            let xs: Result<Vec<i64>, _> =
                                rest[1..].iter().map(|s| s.parse()).collect();
                            rot[idx - 1] =
                                Some(xs.map_err(|_| err(lno, "bad rotation list".into()))?);
                        }
                        _ => unreachable!(),
                    }
                }
                other => return Err(err(lno, format!("unknown key `{other}`"))),
            }
        }
        let n = ncross.ok_or_else(|| err(0, "missing `crossings` line".into()))?;
        let mut missing = Vec::new();
        for i in 1..=n {
            if sign[i - 1].is_none() {
                missing.push(format!("sign {i}"));
            }
            if over[i - 1].is_none() {
                missing.push(format!("over {i}"));
            }
        }
        for j in 1..=arcs {
            if rot[j - 1].is_none() {
                missing.push(format!("rot {j}"));
            }
        }
        if !missing.is_empty() {
            return Err(err(0, format!("missing lines: {}", missing.join(", "))));
        }
        Ok(Diagram {
            name: name.unwrap_or_else(|| "unnamed".into()),
            n_cross: n,
            sign: sign.into_iter().map(Option::unwrap).collect(),
            over: over.into_iter().map(Option::unwrap).collect(),
            over_order: over_order
                .into_iter()
                .map(|o| o.unwrap_or_default())
                .collect(),
            partarc_rot: rot.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn render_kdt(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("knot {}\n", self.name));
        s.push_str(&format!("crossings {}\n", self.n_cross));
        for i in 1..=self.n_cross {
            s.push_str(&format!(
                "sign {} {}\n",
                i,
                if self.sign[i - 1] > 0 { "+" } else { "-" }
            ));
        }
        for i in 1..=self.n_cross {
            s.push_str(&format!("over {} {}\n", i, self.over[i - 1]));
        }
        for j in 1..=self.arcs() {
            if !self.over_order[j - 1].is_empty() {
                let xs: Vec<String> = self.over_order[j - 1].iter().map(|x| x.to_string()).collect();
                s.push_str(&format!("overorder {} {}\n", j, xs.join(" ")));
            }
        }
        for j in 1..=self.arcs() {
            let xs: Vec<String> = self.partarc_rot[j - 1].iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("rot {} {}\n", j, xs.join(" ")));
        }
        s
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} crossings)", self.name, self.n_cross)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn fig8() -> Diagram {
        Diagram::parse_kdt(
            "knot fig8\ncrossings 4\n\
             sign 1 -\nsign 2 +\nsign 3 -\nsign 4 +\n\
             over 1 4\nover 2 1\nover 3 2\nover 4 3\n\
             overorder 1 2\noverorder 2 3\noverorder 3 4\noverorder 4 1\n\
             rot 1 0 0\nrot 2 -1 0\nrot 3 1 0\nrot 4 0 -1\n",
        )
        .unwrap()
    }

    #[test]
    fn parse_fig8_reference_data() {
        let d = fig8();
        assert_eq!(d.n_cross, 4);
        assert_eq!(d.sign, vec![-1, 1, -1, 1]);
        assert_eq!(d.over, vec![4, 1, 2, 3]);
        d.validate().unwrap();
    }

    #[test]
    fn parse_unknot0() {
        let d = Diagram::parse_kdt("knot u\ncrossings 0\nrot 1 1\n").unwrap();
        assert_eq!(d.n_cross, 0);
        d.validate().unwrap();
        let st = d.stats();
        assert_eq!((st.omega, st.rot_k), (0, 0));
        assert_eq!(st.delta_half(5), 0);
    }

    #[test]
    fn duplicate_sign_is_error() {
        let e = Diagram::parse_kdt("crossings 2\nsign 1 +\nsign 1 -\n").unwrap_err();
        match e {
            DiagramError::Parse { line, .. } => assert_eq!(line, 3),
            _ => panic!("expected parse error"),
        }
    }

    #[test]
    fn unknown_key_is_error() {
        assert!(Diagram::parse_kdt("crossings 0\nrot 1 1\nframing 3\n").is_err());
    }

    #[test]
    fn kink_detected() {
        // over(2) = 2 is a kink
        let d = Diagram {
            name: "k".into(),
            n_cross: 2,
            sign: vec![1, 1],
            over: vec![2, 2],
            over_order: vec![vec![], vec![1, 2]],
            partarc_rot: vec![vec![0], vec![0, 0, 1]],
        };
        let errs = match d.validate() {
            Err(DiagramError::Validation(e)) => e,
            _ => panic!("expected validation failure"),
        };
        assert!(errs.iter().any(|m| m.contains("kink")));
    }

    #[test]
    fn perturbed_rot_breaks_circles() {
        let mut d = fig8();
        d.partarc_rot[0][0] += 1;
        let errs = match d.validate() {
            Err(DiagramError::Validation(e)) => e,
            _ => panic!("expected validation failure"),
        };
        assert!(errs.iter().any(|m| m.contains("Seifert")));
    }

    #[test]
    fn fig8_has_three_seifert_circles() {
        let sc = fig8().seifert_circles();
        assert_eq!(sc.circles.len(), 3);
        assert!(sc.rot.iter().all(|r| r.abs() == 1));
    }

    #[test]
    fn fig8_stats() {
        let st = fig8().stats();
        assert_eq!(st.omega, 0);
        assert_eq!(st.rot_k, 0);
        assert_eq!(st.delta_half(2), 0);
    }

    #[test]
    fn mirror_involution_and_stats() {
        let d = fig8();
        let m = d.mirror();
        m.validate().unwrap();
        assert_eq!(m.sign, vec![1, -1, 1, -1]);
        assert_eq!(m.mirror().partarc_rot, d.partarc_rot);
        let st = d.stats();
        let sm = m.stats();
        assert_eq!(sm.omega, -st.omega);
        assert_eq!(sm.rot_k, -st.rot_k);
    }

    #[test]
    fn kdt_roundtrip() {
        let d = fig8();
        let r = Diagram::parse_kdt(&d.render_kdt()).unwrap();
        assert_eq!(r, d);
        assert_eq!(r.render_kdt(), d.render_kdt());
    }
}
