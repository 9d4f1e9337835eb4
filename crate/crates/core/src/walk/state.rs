use crate::{CartanTriple, GroupElement, ProjectivePoint};

/// Order in which new letters enter the product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `product ← letter · product`, i.e. `bₙ ⋯ b₁`.
    Left,
    /// `product ← product · letter`, i.e. `g₁ ⋯ gₙ`.
    Right,
}

/// Running product of a walk together with the cocycle along a base point.
///
/// Left extension updates the cocycle and position incrementally through the
/// cocycle relation; right extension drops them and they are recomputed from
/// the product on demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkState {
    product: GroupElement,
    base: ProjectivePoint,
    steps: usize,
    tracked: Option<(f64, ProjectivePoint)>,
}

impl WalkState {
    pub fn new(base: ProjectivePoint) -> Self {
        Self { product: GroupElement::identity(), base, steps: 0, tracked: Some((0.0, base)) }
    }

    pub fn extend(&mut self, letter: &GroupElement, side: Side) {
        match side {
            Side::Left => {
                let (sigma, pos) = self.tracked.unwrap_or_else(|| (self.product.cocycle(&self.base), self.product.act(&self.base)));
                self.tracked = Some((sigma + letter.cocycle(&pos), letter.act(&pos)));
                self.product = letter.mul(&self.product);
            }
            Side::Right => {
                self.tracked = None;
                self.product = self.product.mul(letter);
            }
        }
        self.steps += 1;
    }

    pub fn product(&self) -> &GroupElement {
        &self.product
    }

    pub fn base(&self) -> ProjectivePoint {
        self.base
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// `σ(product, base)`.
    pub fn cocycle(&self) -> f64 {
        self.tracked.map_or_else(|| self.product.cocycle(&self.base), |(s, _)| s)
    }

    /// `product · base`.
    pub fn position(&self) -> ProjectivePoint {
        self.tracked.map_or_else(|| self.product.act(&self.base), |(_, p)| p)
    }

    pub fn cartan(&self) -> CartanTriple {
        self.product.cartan()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::StepDistribution;
    use crate::rng::SeedKey;

    #[test]
    fn telescoped_cocycle_matches_product() {
        let mu = StepDistribution::preset("zariski-free").unwrap();
        let mut rng = SeedKey::new(11).path_rng(0);
        let mut s = WalkState::new(ProjectivePoint::from_angle(0.3));
        for _ in 0..10_000 {
            s.extend(mu.sample(&mut rng), Side::Left);
        }
        let direct = s.product().cocycle(&s.base());
        assert!((s.cocycle() - direct).abs() < 1e-6, "{} vs {}", s.cocycle(), direct);
        assert!(s.position().distance(&s.product().act(&s.base())) < 1e-9);
    }

    #[test]
    fn right_extension_recomputes() {
        let g = GroupElement::from_matrix(2.0, 1.0, 1.0, 1.0).unwrap();
        let h = GroupElement::from_matrix(1.0, 1.0, 1.0, 2.0).unwrap();
        let x = ProjectivePoint::from_angle(1.0);
        let mut s = WalkState::new(x);
        s.extend(&g, Side::Right);
        s.extend(&h, Side::Right);
        assert!((s.cocycle() - g.mul(&h).cocycle(&x)).abs() < 1e-14);
        s.extend(&g, Side::Left);
        assert!((s.cocycle() - g.mul(&g).mul(&h).cocycle(&x)).abs() < 1e-13);
    }
}
