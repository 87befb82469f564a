use crate::carnot::library::{abelian, heisenberg};
use crate::carnot::{bch_multiply, dilate, GradedHomomorphism, GradedLieAlgebra};

#[derive(Debug, Clone)]
enum Kind {
    Dilation(f64),
    Translation(Vec<f64>),
    Linear(Vec<Vec<f64>>),
    ShearLift,
    Height,
}

/// Closed-form smooth map between Carnot groups in exponential coordinates.
#[derive(Debug, Clone)]
pub struct SmoothMap {
    id: String,
    source: GradedLieAlgebra,
    target: GradedLieAlgebra,
    kind: Kind,
}

impl SmoothMap {
    pub fn dilation(alg: &GradedLieAlgebra, t: f64) -> Self {
        SmoothMap { id: format!("dilation({t})"), source: alg.clone(), target: alg.clone(), kind: Kind::Dilation(t) }
    }

    /// Left translation `x ↦ g·x`.
    pub fn translation(alg: &GradedLieAlgebra, g: Vec<f64>) -> Self {
        assert_eq!(g.len(), alg.dim());
        SmoothMap { id: "translation".into(), source: alg.clone(), target: alg.clone(), kind: Kind::Translation(g) }
    }

    /// The group map `exp ∘ A ∘ log` of a graded homomorphism `A`.
    pub fn automorphism(h: &GradedHomomorphism) -> Self {
        SmoothMap {
            id: "automorphism".into(),
            source: h.source().clone(),
            target: h.target().clone(),
            kind: Kind::Linear(h.matrix().to_f64()),
        }
    }

    /// Heisenberg contact lift of `(x1, x2) ↦ (x1 + sin x2, x2)`:
    /// `(x1 + sin x2, x2, x3 + 1 − cos x2 − ½ x2 sin x2)`.
    pub fn shear_lift() -> Self {
        let h = heisenberg();
        SmoothMap { id: "shear".into(), source: h.clone(), target: h, kind: Kind::ShearLift }
    }

    /// `g(x) = sin x1 + ½ x2² + x3` from the Heisenberg group to `ℝ`.
    pub fn height() -> Self {
        SmoothMap { id: "height".into(), source: heisenberg(), target: abelian(1), kind: Kind::Height }
    }

    /// Built-in entries by id.
    pub fn catalog(id: &str) -> Option<Self> {
        let h = heisenberg();
        match id {
            "dilation" => Some(Self::dilation(&h, 2.0)),
            "translation" => Some(Self::translation(&h, vec![0.7, -0.4, 1.3])),
            "automorphism" => Some(Self::automorphism(&heisenberg_automorphism())),
            "shear" => Some(Self::shear_lift()),
            "height" => Some(Self::height()),
            _ => None,
        }
    }

    pub fn catalog_ids() -> &'static [&'static str] {
        &["dilation", "translation", "automorphism", "shear", "height"]
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn source(&self) -> &GradedLieAlgebra {
        &self.source
    }

    pub fn target(&self) -> &GradedLieAlgebra {
        &self.target
    }

    /// Linear in exponential coordinates, so the Pansu and ordinary
    /// pullbacks agree and the identity is exact up to quadrature.
    pub fn is_automorphism(&self) -> bool {
        matches!(self.kind, Kind::Dilation(_) | Kind::Linear(_))
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        match &self.kind {
            Kind::Dilation(t) => dilate(&self.source, t, x),
            Kind::Translation(g) => bch_multiply(&self.source, g, x),
            Kind::Linear(a) => a.iter().map(|row| row.iter().zip(x).map(|(r, v)| r * v).sum()).collect(),
            Kind::ShearLift => {
                let (s, c) = x[1].sin_cos();
                vec![x[0] + s, x[1], x[2] + 1.0 - c - 0.5 * x[1] * s]
            }
            Kind::Height => vec![x[0].sin() + 0.5 * x[1] * x[1] + x[2]],
        }
    }

    /// Exact Pansu differential at `x`; rows index the target basis.
    pub fn closed_form(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let n = self.source.dim();
        match &self.kind {
            Kind::Dilation(t) => (0..n)
                .map(|i| (0..n).map(|j| if i == j { t.powi(self.source.weight(i) as i32) } else { 0.0 }).collect())
                .collect(),
            Kind::Translation(_) => (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect(),
            Kind::Linear(a) => a.clone(),
            Kind::ShearLift => vec![vec![1.0, x[1].cos(), 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
            // horizontal derivatives X1 g, X2 g; the V2 direction maps to zero
            Kind::Height => vec![vec![x[0].cos() - 0.5 * x[1], x[1] + 0.5 * x[0], 0.0]],
        }
    }
}

/// `(x1, x2) ↦ (2x1 + x2, x1 + x2)` on `V1`, identity on `V2`.
pub fn heisenberg_automorphism() -> GradedHomomorphism {
    let h = heisenberg();
    let a = crate::exactla::Matrix::from_i64(&[&[2, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
    crate::carnot::validate_homomorphism(&h, &h, &a).expect("determinant one on V1")
}
