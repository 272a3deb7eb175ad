//! Seeded random spaces, functions and regions.
//!
//! Values are drawn from coarse dyadic grids so that breakpoints and region
//! endpoints collide often, which is where boundary handling matters.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pl::PLFun;
use crate::rational::{int, rat, Rational};
use crate::region::{Piece, Region};
use crate::space::Space;

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    /// `lo + (hi - lo)·k/den` for a random `0 ≤ k ≤ den`.
    pub fn grid_point(&mut self, lo: &Rational, hi: &Rational, den: i64) -> Rational {
        let k = self.rng.gen_range(0..=den);
        lo + (hi - lo) * rat(k, den)
    }

    /// A random small rational in `[-m, m]`.
    pub fn value(&mut self, m: i64) -> Rational {
        let den = [1, 2, 3, 4][self.below(4)];
        let k = self.rng.gen_range(-m * den..=m * den);
        rat(k, den)
    }

    /// A random point of the space, sometimes off the coarse grid.
    pub fn point(&mut self, space: &Space) -> Rational {
        let ci = self.below(space.len());
        let (a, b) = space.component(ci);
        let den = if self.coin() { 16 } else { 997 };
        self.grid_point(a, b, den)
    }

    /// One to three components, occasionally including an isolated point.
    pub fn space(&mut self) -> Arc<Space> {
        let count = 1 + self.below(3);
        let mut x = int(self.rng.gen_range(-3..=0));
        let mut comps = Vec::with_capacity(count);
        for _ in 0..count {
            let len = if self.below(5) == 0 {
                int(0)
            } else {
                rat(self.rng.gen_range(1..=8), 4)
            };
            let b = &x + len;
            comps.push((x.clone(), b.clone()));
            x = b + rat(self.rng.gen_range(1..=4), 4);
        }
        Space::new(comps).expect("separated components")
    }

    /// A random function with up to `max_inner` interior breakpoints per
    /// component and values in `[-m, m]`.
    pub fn pl(&mut self, space: &Arc<Space>, max_inner: usize, m: i64) -> PLFun {
        let mut comps = Vec::with_capacity(space.len());
        for ci in 0..space.len() {
            let (a, b) = space.component(ci);
            if a == b {
                comps.push(vec![(a.clone(), self.value(m))]);
                continue;
            }
            let mut xs = vec![a.clone(), b.clone()];
            for _ in 0..self.below(max_inner + 1) {
                xs.push(self.grid_point(a, b, 16));
            }
            xs.sort();
            xs.dedup();
            let zero_bias = self.below(3) == 0;
            comps.push(
                xs.into_iter()
                    .map(|x| {
                        let v = if zero_bias && self.coin() {
                            int(0)
                        } else {
                            self.value(m)
                        };
                        (x, v)
                    })
                    .collect(),
            );
        }
        PLFun::new(space, comps).expect("valid breakpoints")
    }

    pub fn nonneg_pl(&mut self, space: &Arc<Space>, max_inner: usize, m: i64) -> PLFun {
        self.pl(space, max_inner, m).abs()
    }

    /// A random region with arbitrary endpoint flags.
    pub fn region(&mut self, space: &Arc<Space>, max_pieces: usize) -> Region {
        let mut pieces = Vec::new();
        for ci in 0..space.len() {
            let (a, b) = space.component(ci);
            if a == b {
                if self.coin() {
                    pieces.push(Piece::point(a.clone()));
                }
                continue;
            }
            for _ in 0..self.below(max_pieces + 1) {
                let x = self.grid_point(a, b, 8);
                let y = self.grid_point(a, b, 8);
                let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                let (lc, hc) = (self.coin(), self.coin());
                pieces.push(Piece::new(lo, hi, lc, hc));
            }
        }
        Region::from_pieces(space, pieces).expect("pieces lie in their components")
    }

    pub fn open_region(&mut self, space: &Arc<Space>, max_pieces: usize) -> Region {
        self.region(space, max_pieces).interior()
    }

    pub fn closed_region(&mut self, space: &Arc<Space>, max_pieces: usize) -> Region {
        self.region(space, max_pieces).closure()
    }

    pub fn regular_open_region(&mut self, space: &Arc<Space>, max_pieces: usize) -> Region {
        self.open_region(space, max_pieces).regularization()
    }

    /// A union of randomly chosen components.
    pub fn clopen_region(&mut self, space: &Arc<Space>) -> Region {
        let chosen: Vec<usize> = (0..space.len()).filter(|_| self.coin()).collect();
        Region::components(space, &chosen)
    }

    pub fn seed(&mut self) -> u64 {
        self.rng.gen()
    }
}
