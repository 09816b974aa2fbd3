//! Verification suites over a configuration, with JSON and text reports
//! and an SVG figure.

mod pencil;
mod poly;
mod report;
mod session;
mod suites;
mod svg;

use std::ops::RangeInclusive;
use std::time::Instant;

pub use pencil::{probe, Pencil, PencilProbe};
pub use poly::{rational_roots, Poly};
pub use report::{Check, SuiteReport, Verdict};
pub use session::{line_key, stream_seed, Bundle, ExaminedLine, Session, SAMPLE_BOUND};
pub use suites::{
    probe_pencils, suite_examples, suite_main_theorem, suite_pencil, suite_pipeline, suite_qpon, suite_sections,
    suite_self_duality, suite_stability, suite_twists, FINGERPRINT_WINDOW, LINES_PER_BUNDLE,
};
pub use svg::emit_svg;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Pipeline,
    Sections,
    Qpon,
    Examples,
    Twists,
    Stability,
    Pencil,
    SelfDuality,
    /// Runs last in [`run_all`] so it sees every line the others examined.
    MainTheorem,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Pipeline,
        Suite::Sections,
        Suite::Qpon,
        Suite::Examples,
        Suite::Twists,
        Suite::Stability,
        Suite::Pencil,
        Suite::SelfDuality,
        Suite::MainTheorem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Pipeline => "pipeline",
            Suite::Sections => "sections",
            Suite::Qpon => "qpon",
            Suite::Examples => "examples",
            Suite::Twists => "twists",
            Suite::Stability => "stability",
            Suite::Pencil => "pencil",
            Suite::SelfDuality => "self-duality",
            Suite::MainTheorem => "main-theorem",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

/// Default range of `n` for the splitting suite.
pub const DEFAULT_N_RANGE: RangeInclusive<i64> = 2..=5;

pub fn run(s: &Session, suite: Suite, n_range: RangeInclusive<i64>) -> SuiteReport {
    let start = Instant::now();
    let mut r = match suite {
        Suite::Pipeline => suite_pipeline(&s.config, s.seed),
        Suite::Sections => suite_sections(s),
        Suite::Qpon => suite_qpon(s, n_range),
        Suite::Examples => suite_examples(s),
        Suite::Twists => suite_twists(s),
        Suite::Stability => suite_stability(s),
        Suite::Pencil => suite_pencil(s),
        Suite::SelfDuality => suite_self_duality(s),
        Suite::MainTheorem => suite_main_theorem(s),
    };
    r.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    r
}

/// Every suite in order, sharing one session.
pub fn run_all(s: &Session, n_range: RangeInclusive<i64>) -> Vec<SuiteReport> {
    Suite::ALL.into_iter().map(|x| run(s, x, n_range.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::from_name(s.name()), Some(s));
        }
        assert_eq!(Suite::from_name("nope"), None);
        assert_eq!(Suite::ALL.last(), Some(&Suite::MainTheorem));
    }
}
