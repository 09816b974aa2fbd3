use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::bitangents::{all_28, BitangentSet};
use crate::error::Result;
use crate::forms::DualLine;
use crate::netcubics::{CubicNet, PointConfig};
use crate::picsheaf::PicClass;
use crate::presentations::{build_e, presentation_of_class, seeded_lines, splitting_type, Presentation, SplittingType};
use crate::ramification::{branch_quartic, is_bitangent, BranchQuartic, TangencyCertificate};

/// Coordinate bound for seeded lines and points.
pub const SAMPLE_BOUND: i64 = 50;

/// A bundle by how it is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bundle {
    /// `E_n` from its explicit presentation.
    Direct(i64),
    /// The direct image of a class, from its section module.
    Graded(PicClass),
}

impl Bundle {
    pub fn e(n: i64) -> Self {
        Bundle::Direct(n)
    }

    pub fn ek(n: i64, k: usize) -> Self {
        Bundle::Graded(PicClass::e_nk(n, k))
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bundle::Direct(n) => write!(f, "E{n}"),
            Bundle::Graded(l) => {
                let k = l.t.iter().take_while(|&&t| t == -1).count();
                if l.t[k..].iter().all(|&t| t == 0) {
                    write!(f, "E{}^{}", l.n, k)
                } else {
                    write!(f, "L{l}")
                }
            }
        }
    }
}

/// One splitting computed during a run.
#[derive(Clone, Debug)]
pub struct ExaminedLine {
    pub bundle: String,
    pub line: DualLine,
    pub splitting: SplittingType,
    pub source: String,
}

/// Everything derived once from a configuration and shared by the suites:
/// the net, the quartic, its bitangents, built bundles, and the log of
/// every line examined so far.
pub struct Session {
    pub seed: u64,
    pub config: PointConfig,
    pub net: CubicNet,
    pub quartic: BranchQuartic,
    pub bitangents: BitangentSet,
    bundles: Mutex<HashMap<Bundle, Presentation>>,
    examined: Mutex<Vec<ExaminedLine>>,
    certificates: Mutex<HashMap<String, Option<TangencyCertificate>>>,
}

/// FNV-1a of the label, mixed with the run seed.
pub fn stream_seed(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

pub fn line_key(line: &DualLine) -> String {
    let e = line.equation();
    format!("{} {} {}", e[0], e[1], e[2])
}

impl Session {
    pub fn new(config: PointConfig, seed: u64) -> Result<Self> {
        let net = CubicNet::new(&config)?;
        let quartic = branch_quartic(&net)?;
        let bitangents = all_28(&net, &quartic)?;
        Ok(Session {
            seed,
            config,
            net,
            quartic,
            bitangents,
            bundles: Mutex::new(HashMap::new()),
            examined: Mutex::new(Vec::new()),
            certificates: Mutex::new(HashMap::new()),
        })
    }

    /// The session on the seeded configuration.
    pub fn seeded(seed: u64) -> Result<Self> {
        Session::new(PointConfig::seeded(seed), seed)
    }

    pub fn bundle(&self, b: Bundle) -> Result<Presentation> {
        if let Some(p) = self.bundles.lock().expect("lock").get(&b) {
            return Ok(p.clone());
        }
        let p = match b {
            Bundle::Direct(n) => build_e(&self.net, n)?,
            Bundle::Graded(l) => presentation_of_class(&self.net, &l)?,
        };
        self.bundles.lock().expect("lock").insert(b, p.clone());
        Ok(p)
    }

    /// Seeded lines for a named purpose; distinct purposes draw
    /// independent streams.
    pub fn sample_lines(&self, label: &str, count: usize) -> Vec<DualLine> {
        seeded_lines(stream_seed(self.seed, label), count, SAMPLE_BOUND)
    }

    /// Splitting types on the given lines, logged in input order.
    pub fn split_all(&self, b: Bundle, lines: &[DualLine], source: &str) -> Result<Vec<SplittingType>> {
        let p = self.bundle(b)?;
        let out: Vec<SplittingType> = lines
            .par_iter()
            .map(|l| splitting_type(&p, l))
            .collect::<Result<_>>()?;
        let label = b.to_string();
        let mut log = self.examined.lock().expect("lock");
        for (l, st) in lines.iter().zip(&out) {
            log.push(ExaminedLine {
                bundle: label.clone(),
                line: l.clone(),
                splitting: *st,
                source: source.to_string(),
            });
        }
        Ok(out)
    }

    pub fn examined(&self) -> Vec<ExaminedLine> {
        self.examined.lock().expect("lock").clone()
    }

    pub fn examined_count(&self, b: Bundle) -> usize {
        let label = b.to_string();
        self.examined.lock().expect("lock").iter().filter(|e| e.bundle == label).count()
    }

    /// Bitangency certificate of a line, memoized by its equation.
    pub fn certificate(&self, line: &DualLine) -> Result<Option<TangencyCertificate>> {
        let key = line_key(line);
        if let Some(c) = self.certificates.lock().expect("lock").get(&key) {
            return Ok(c.clone());
        }
        let c = is_bitangent(line, &self.quartic)?;
        self.certificates.lock().expect("lock").insert(key, c.clone());
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundle_labels() {
        assert_eq!(Bundle::e(3).to_string(), "E3");
        assert_eq!(Bundle::ek(2, 5).to_string(), "E2^5");
        assert_eq!(Bundle::Graded(PicClass::new(1, [0, -1, 0, 0, 0, 0, 0])).to_string(), "L(1; [0, -1, 0, 0, 0, 0, 0])");
    }

    #[test]
    fn streams_differ() {
        assert_ne!(stream_seed(1, "a"), stream_seed(1, "b"));
        assert_ne!(stream_seed(1, "a"), stream_seed(2, "a"));
        assert_eq!(stream_seed(3, "qpon"), stream_seed(3, "qpon"));
    }
}
