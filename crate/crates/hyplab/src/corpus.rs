//! A deterministic corpus of smooth hyperbolic families used by the built-in
//! checks: each family is defined by explicit smooth root functions
//! (hyperbolic by construction) whose graphs cross, so the ordered roots are
//! genuinely only Lipschitz.

use hypcore::curve::{Grid, Interval, IntervalNest, SampledCurve};
use hypcore::poly::vieta;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// One smooth root section `c0 + c1 x + c2 x^2 + amp sin(freq x + phase)`.
#[derive(Debug, Clone, Copy)]
pub struct RootSection {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub amp: f64,
    pub freq: f64,
    pub phase: f64,
}

impl RootSection {
    pub fn eval(&self, x: f64) -> f64 {
        self.c0 + self.c1 * x + self.c2 * x * x + self.amp * (self.freq * x + self.phase).sin()
    }
}

/// A polynomial family given by smooth root sections.
#[derive(Debug, Clone)]
pub struct RootFamily {
    pub sections: Vec<RootSection>,
}

impl RootFamily {
    pub fn degree(&self) -> usize {
        self.sections.len()
    }

    /// Coefficient curve on `grid` (signed elementary symmetric functions of
    /// the sections, nodewise).
    pub fn coeff_curve(&self, grid: Grid) -> SampledCurve {
        let mut polys = Vec::with_capacity(grid.num_nodes());
        for i in 0..grid.num_nodes() {
            let x = grid.node(i);
            let roots: Vec<f64> = self.sections.iter().map(|s| s.eval(x)).collect();
            polys.push(vieta(&roots).expect("finite sections"));
        }
        SampledCurve::from_polys(grid, &polys).expect("one polynomial per node")
    }
}

/// The interval the corpus lives on.
pub fn corpus_interval() -> Interval {
    Interval::new(-1.5, 1.5).expect("static interval")
}

/// The nested pair used for corpus norm estimation (margin 0.25).
pub fn corpus_nest() -> IntervalNest {
    IntervalNest::new(
        Interval::new(-1.0, 1.0).expect("static interval"),
        Interval::new(-1.25, 1.25).expect("static interval"),
    )
    .expect("strictly nested")
}

/// Deterministic corpus of `count` families with degrees cycling through
/// {2, 3, 4}.
pub fn builtin_corpus(count: usize) -> Vec<RootFamily> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0_FFEE);
    (0..count)
        .map(|i| {
            let degree = 2 + i % 3;
            let sections = (0..degree)
                .map(|_| RootSection {
                    c0: rng.gen_range(-2.0..2.0),
                    c1: rng.gen_range(-1.0..1.0),
                    c2: rng.gen_range(-1.0..1.0),
                    amp: rng.gen_range(0.0..0.8),
                    freq: rng.gen_range(0.5..3.0),
                    phase: rng.gen_range(0.0..std::f64::consts::TAU),
                })
                .collect();
            RootFamily { sections }
        })
        .collect()
}
