//! Seeded verification suites shared by the command line and the acceptance
//! target. Each returns a serializable report with an overall verdict.

use rand::Rng;
use serde::Serialize;

use crate::carnot::library::heisenberg;
use crate::filtered::{dualize, DualityData, FilteredComplex};
use crate::forms::build_polynomial_complex;
use crate::morphism::{
    check_identity, induce_morphism, negative_control, sample_constrained_map, verify_duality_transport, Certificate,
    NEGATIVE_CONTROL_SEED,
};
use crate::numeric::{admissible_pairs, verify_pullback_identity, BumpForm, PullbackReport, SmoothMap, Tolerances};
use crate::random::{named_rng, random_filtered_complex, RandomComplexParams};
use crate::spectral::{compute_pages, compute_pages_homological};

pub const DUALITY_MAX_DIM: usize = 8;
pub const DUALITY_FILTRATION_LENGTH: i32 = 4;
pub const DUALITY_PAGES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityCase {
    pub case: usize,
    pub coordinate: bool,
    pub dims: Vec<usize>,
    pub filtration: (i32, i32),
    /// Cells with a nonzero Gram matrix, summed over pages.
    pub cells: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualitySuite {
    pub suite: &'static str,
    pub seed: u64,
    pub r_max: usize,
    pub cases: Vec<DualityCase>,
    pub pass: bool,
}

/// The random chain complexes of the duality suite, with their duals.
pub fn duality_corpus(seed: u64, cases: usize) -> Vec<(bool, DualityData)> {
    let mut rng = named_rng(seed, "duality-suite");
    (0..cases)
        .map(|i| {
            let coordinate = i % 2 == 0;
            let params = RandomComplexParams {
                degrees: rng.gen_range(2..=4),
                max_dim: DUALITY_MAX_DIM,
                filtration_length: rng.gen_range(1..=DUALITY_FILTRATION_LENGTH),
                max_coeff: 2,
                coordinate,
            };
            let chain = random_filtered_complex(&mut rng, &params).dual();
            (coordinate, dualize(&chain))
        })
        .collect()
}

/// Page pairing of each random chain complex with its dual on pages `0..=5`.
pub fn duality_suite(seed: u64, cases: usize) -> DualitySuite {
    let cases: Vec<DualityCase> = duality_corpus(seed, cases)
        .into_iter()
        .enumerate()
        .map(|(case, (coordinate, d))| {
            let mut out = DualityCase {
                case,
                coordinate,
                dims: d.chain.dims().to_vec(),
                filtration: (d.chain.p_min(), d.chain.p_max()),
                cells: 0,
                pass: false,
                error: None,
            };
            let pages = compute_pages(&d.cochain, DUALITY_PAGES)
                .and_then(|c| compute_pages_homological(&d.chain, DUALITY_PAGES).map(|h| (c, h)));
            match pages {
                Err(e) => out.error = Some(e.to_string()),
                Ok((c, h)) => match crate::morphism::page_pairing(&c, &h) {
                    Err(e) => out.error = Some(e.to_string()),
                    Ok(pp) => {
                        out.cells = pp.iter().map(|p| p.gram.values().filter(|g| g.rows() > 0).count()).sum();
                        out.pass = true;
                    }
                },
            }
            out
        })
        .collect();
    let pass = cases.iter().all(|c| c.pass);
    DualitySuite { suite: "duality", seed, r_max: DUALITY_PAGES, cases, pass }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismCase {
    pub sample_seed: u64,
    pub is_chain_map: bool,
    pub solution_dim: usize,
    pub identity_holds: bool,
    pub pages: usize,
    pub all_pages_chain_maps: bool,
    pub transport_consistent: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NegativeControlEntry {
    pub seed: u64,
    pub identity_holds: bool,
    pub certificate: Option<Certificate>,
    /// `(r, p, q)` of the first page whose induced map is not a chain map.
    pub failure: Option<(usize, i32, i32)>,
    pub transport_consistent: bool,
    /// The control must fail, at a definite page, with a certificate.
    pub fails_as_required: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismSuite {
    pub suite: &'static str,
    pub seed: u64,
    pub instance: String,
    pub cases: Vec<MorphismCase>,
    pub non_chain_maps: usize,
    pub negative_control: NegativeControlEntry,
    pub pass: bool,
}

/// Truncated polynomial Heisenberg model with `D = 1` and the dual of its
/// chain model.
pub fn morphism_instance() -> (FilteredComplex, DualityData) {
    let b = build_polynomial_complex(&heisenberg(), 1);
    let chain = b.chain_model(4);
    (b.complex, dualize(&chain.complex))
}

pub fn morphism_suite(seed: u64, cases: usize) -> MorphismSuite {
    let (source, duality) = morphism_instance();
    let mut rng = named_rng(seed, "morphism-suite");
    let cases: Vec<MorphismCase> = (0..cases)
        .map(|_| {
            let sample_seed: u64 = rng.gen();
            let out = sample_constrained_map(&source, &duality, sample_seed);
            let f = &out.map;
            let identity_holds = check_identity(f).holds;
            let mut case = MorphismCase {
                sample_seed,
                is_chain_map: f.is_chain_map(),
                solution_dim: out.solution_dim,
                identity_holds,
                pages: 0,
                all_pages_chain_maps: false,
                transport_consistent: false,
                pass: false,
            };
            if let Ok(m) = induce_morphism(f, f.page_bound()) {
                case.pages = m.pages.len();
                case.all_pages_chain_maps = m.reached_end() && m.first_failure.is_none();
                case.transport_consistent = verify_duality_transport(f, &m).is_ok_and(|t| t.consistent);
            }
            case.pass = !out.empty && identity_holds && case.all_pages_chain_maps && case.transport_consistent;
            case
        })
        .collect();
    let negative = negative_control_entry(NEGATIVE_CONTROL_SEED);
    let non_chain_maps = cases.iter().filter(|c| !c.is_chain_map).count();
    let pass = cases.iter().all(|c| c.pass) && negative.fails_as_required;
    MorphismSuite {
        suite: "morphism",
        seed,
        instance: "heisenberg poly D=1".into(),
        cases,
        non_chain_maps,
        negative_control: negative,
        pass,
    }
}

pub fn negative_control_entry(seed: u64) -> NegativeControlEntry {
    let mut entry = NegativeControlEntry {
        seed,
        identity_holds: true,
        certificate: None,
        failure: None,
        transport_consistent: false,
        fails_as_required: false,
    };
    let Some(nc) = negative_control(seed) else {
        return entry;
    };
    let check = check_identity(&nc.map);
    entry.identity_holds = check.holds;
    entry.certificate = check.certificate;
    if let Ok(m) = induce_morphism(&nc.map, nc.map.page_bound()) {
        entry.failure = m.first_failure;
        entry.transport_consistent = verify_duality_transport(&nc.map, &m)
            .is_ok_and(|t| t.consistent && t.mismatch.map(|x| x.r) == m.first_failure.map(|x| x.0));
    }
    entry.fails_as_required =
        !entry.identity_holds && entry.certificate.is_some() && entry.failure.is_some() && entry.transport_consistent;
    entry
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PullbackSuite {
    pub suite: &'static str,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub shear: Vec<PullbackReport>,
    pub baseline: Vec<PullbackReport>,
    /// Weight-violating pair, integrated without a verdict.
    pub diagnostic: PullbackReport,
    pub baseline_below_tolerance: bool,
    pub pass: bool,
}

fn run_pairs(f: &SmoothMap, tol: &Tolerances) -> Vec<PullbackReport> {
    let n = f.source().dim();
    admissible_pairs(f)
        .into_iter()
        .map(|(omega, j)| {
            verify_pullback_identity(f, &omega, &BumpForm::standard(n, j), tol, false)
                .expect("admissible pairs satisfy the weight conditions")
        })
        .collect()
}

/// Shear lift over every admissible pair, automorphism baseline, and the
/// weight-violating diagnostic for the height map. The seed is recorded only.
pub fn pullback_suite(seed: u64, tol: &Tolerances) -> PullbackSuite {
    let shear = run_pairs(&SmoothMap::shear_lift(), tol);
    let baseline = run_pairs(&SmoothMap::catalog("automorphism").expect("catalog entry"), tol);
    let height = SmoothMap::height();
    let diagnostic = verify_pullback_identity(
        &height,
        &crate::forms::ExteriorElement::theta(1, &[0]),
        &BumpForm::standard(3, crate::forms::MultiIndex::single(2)),
        tol,
        true,
    )
    .expect("degrees match");
    let baseline_below_tolerance =
        baseline.iter().all(|r| r.pass == Some(true) && r.residuals[1] * tol.baseline_ratio < tol.pass_residual);
    let pass = baseline_below_tolerance && shear.iter().all(|r| r.pass == Some(true));
    PullbackSuite {
        suite: "pullback",
        seed,
        tolerances: *tol,
        shear,
        baseline,
        diagnostic,
        baseline_below_tolerance,
        pass,
    }
}
