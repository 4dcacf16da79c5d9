//! Built-in experiments: Mach-Zehnder devices, two slits, Stern-Gerlach and
//! the double Stern-Gerlach arrangement.
//!
//! Optics is modelled in single-excitation mode spaces. Conventions:
//!
//! * balanced beam splitter on two modes: `(1/√2)[[1, i], [i, 1]]`;
//! * mirror pair: phase `i` times the swap of the two modes;
//! * preparator at angle `θ`: `cos θ |h⟩ + i sin θ |v⟩`.
//!
//! Modes that exist in the Hilbert space but are never fed by the preparator
//! (an unused input port, slit-less screen positions) get their own
//! eigen-event in the intermediate observable, labelled as idle/dark, so
//! the observable stays complete.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{
    basis_projector, basis_vector, c, direct_sum, identity, kron, orthonormal_completion, outer,
    CMatrix, CVector, Tolerances, I, ONE, ZERO,
};
use crate::model::{Candidate, DensityOperator, Experiment, SpectralObservable, Timeline};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogId {
    MzWhichWay,
    MzInterference,
    UmzInterference,
    UmzWhichWay,
    SternGerlach,
    DoubleSternGerlach,
    TwoSlitNear,
    TwoSlitFar,
}

impl CatalogId {
    pub const ALL: [CatalogId; 8] = [
        CatalogId::MzWhichWay,
        CatalogId::MzInterference,
        CatalogId::UmzInterference,
        CatalogId::UmzWhichWay,
        CatalogId::SternGerlach,
        CatalogId::DoubleSternGerlach,
        CatalogId::TwoSlitNear,
        CatalogId::TwoSlitFar,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CatalogId::MzWhichWay => "mz-whichway",
            CatalogId::MzInterference => "mz-interference",
            CatalogId::UmzInterference => "umz-interference",
            CatalogId::UmzWhichWay => "umz-whichway",
            CatalogId::SternGerlach => "sg",
            CatalogId::DoubleSternGerlach => "double-sg",
            CatalogId::TwoSlitNear => "two-slit-near",
            CatalogId::TwoSlitFar => "two-slit-far",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            CatalogId::MzWhichWay => "Mach-Zehnder, second beam splitter removed",
            CatalogId::MzInterference => "Mach-Zehnder, second beam splitter in place",
            CatalogId::UmzInterference => "three-beam-splitter Mach-Zehnder, top splitter in place",
            CatalogId::UmzWhichWay => "three-beam-splitter Mach-Zehnder, top splitter removed",
            CatalogId::SternGerlach => "Stern-Gerlach spin projection along one axis",
            CatalogId::DoubleSternGerlach => {
                "z-routing followed by x (upper) and y (lower) analyzers"
            }
            CatalogId::TwoSlitNear => "two slits, screen where the paths cross",
            CatalogId::TwoSlitFar => "two slits, detectors where the paths have separated",
        }
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CatalogId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CatalogId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::ParameterOutOfRange(format!("unknown catalog scenario `{s}`")))
    }
}

/// Scenario id plus the parameters its builder accepts.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogConfig {
    pub id: CatalogId,
    /// Preparator angle in degrees, `0 ≤ θ ≤ 180` (Mach-Zehnder only).
    pub theta_deg: f64,
    /// Screen resolution for the two-slit scenarios (even, ≥ 4).
    pub bins: usize,
    /// Spin axis for the Stern-Gerlach scenario.
    pub axis: [f64; 3],
}

impl CatalogConfig {
    pub fn new(id: CatalogId) -> Self {
        CatalogConfig {
            id,
            theta_deg: 45.0,
            bins: 8,
            axis: [0.0, 0.0, 1.0],
        }
    }

    pub fn build(&self) -> Result<Experiment> {
        match self.id {
            CatalogId::MzWhichWay => mach_zehnder(self.theta_deg, false),
            CatalogId::MzInterference => mach_zehnder(self.theta_deg, true),
            CatalogId::UmzInterference => upgraded_mach_zehnder(true),
            CatalogId::UmzWhichWay => upgraded_mach_zehnder(false),
            CatalogId::SternGerlach => stern_gerlach(self.axis),
            CatalogId::DoubleSternGerlach => double_stern_gerlach(),
            CatalogId::TwoSlitNear => two_slit(self.bins, true),
            CatalogId::TwoSlitFar => two_slit(self.bins, false),
        }
    }
}

/// Builds a catalog scenario with default parameters.
pub fn build(id: CatalogId) -> Result<Experiment> {
    CatalogConfig::new(id).build()
}

fn tol() -> Tolerances {
    Tolerances::default()
}

/// `(1/√2)[[1, i], [i, 1]]`.
pub fn beam_splitter() -> CMatrix {
    let h = FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(0.0, h), c(0.0, h), c(h, 0.0)])
}

/// Mirror pair: `i` times the swap of the two modes.
pub fn mirrors() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, I, I, ZERO])
}

pub fn preparator_ket(theta_deg: f64) -> CVector {
    let theta = theta_deg.to_radians();
    CVector::from_vec(vec![c(theta.cos(), 0.0), c(0.0, theta.sin())])
}

fn rank_one_family(dim: usize, order: &[usize]) -> Vec<CMatrix> {
    order.iter().map(|&i| basis_projector(dim, &[i])).collect()
}

fn observable(projectors: Vec<CMatrix>, labels: &[&str]) -> Result<SpectralObservable> {
    Ok(
        SpectralObservable::from_projectors(projectors, &tol())?
            .with_labels(labels.iter().copied()),
    )
}

/// Two-mode Mach-Zehnder with modes `{h, v}` leaving the preparator.
pub fn mach_zehnder(theta_deg: f64, interference_device: bool) -> Result<Experiment> {
    if !(0.0..=180.0).contains(&theta_deg) {
        return Err(Error::ParameterOutOfRange(format!(
            "preparator angle {theta_deg}° outside [0, 180]"
        )));
    }
    let step = if interference_device {
        beam_splitter() * mirrors()
    } else {
        mirrors()
    };
    let t = tol();
    let initial = DensityOperator::pure(&preparator_ket(theta_deg))?;
    let timeline = Timeline::single(step, &t)?;
    let detectors = observable(rank_one_family(2, &[0, 1]), &["D_h", "D_v"])?;
    let b = observable(rank_one_family(2, &[0, 1]), &["Q_h", "Q_v"])?;
    Experiment::new(
        initial,
        timeline,
        detectors,
        vec![Candidate::new("B", "t_i", b)],
    )
}

const LH: usize = 0;
const UH: usize = 1;
const V: usize = 2;

/// Three beam splitters, two mirrors, three detectors. Modes are `{lh, uh,
/// v}`: lower horizontal, upper horizontal, vertical.
///
/// At `t_i` the photon has left the bottom splitter; `Q_u` is the unused
/// input port of the intermediary splitter. The intermediary splitter acts
/// between `t_i` and `t_0`; the mirrors and the top splitter between `t_0`
/// and `t_f`.
pub fn upgraded_mach_zehnder(top_bs_present: bool) -> Result<Experiment> {
    let t = tol();
    let lower = CMatrix::identity(1, 1);
    let intermediary = direct_sum(&[&lower, &beam_splitter()]);
    let top = if top_bs_present {
        direct_sum(&[&lower, &(beam_splitter() * mirrors())])
    } else {
        identity(3)
    };
    let timeline = Timeline::new(["t_i", "t_0", "t_f"], vec![intermediary, top], &t)?;

    let ket = CVector::from_vec(vec![c(FRAC_1_SQRT_2, 0.0), ZERO, c(0.0, FRAC_1_SQRT_2)]);
    let initial = DensityOperator::pure(&ket)?;
    let detectors = observable(
        rank_one_family(3, &[LH, UH, V]),
        &["bottom", "upper-horizontal", "top"],
    )?;

    let b = observable(rank_one_family(3, &[LH, V, UH]), &["Q_h", "Q_v", "Q_u"])?;
    let b0 = observable(rank_one_family(3, &[LH, UH, V]), &["Q_lh", "Q_uh", "Q_v"])?;

    let upper = vec![vec![0], vec![1, 2]];
    let candidates = if top_bs_present {
        let b0_coarse = b0.coarsen_keep_min(&upper, &t)?;
        vec![
            Candidate::new("B", "t_i", b),
            Candidate::new("B_0", "t_0", b0),
            Candidate::new("B'_0", "t_0", b0_coarse),
        ]
    } else {
        vec![
            Candidate::new("B", "t_i", b.clone()),
            // f(A): bottom detector versus (upper-horizontal or top); B with
            // its idle port merged into Q_v evolves onto exactly f(A)
            Candidate::new("B|f(A)", "t_i", b.coarsen_keep_min(&upper, &t)?)
                .against_coarsening(upper),
            Candidate::new("B_0", "t_0", b0),
        ]
    };
    Experiment::new(initial, timeline, detectors, candidates)
}

/// `|n, ±⟩` for the unit vector `n` (in the σ_z basis).
fn spin_basis(axis: [f64; 3]) -> (CVector, CVector) {
    let [x, y, z] = axis;
    let theta = z.clamp(-1.0, 1.0).acos();
    let phi = y.atan2(x);
    let (s, co) = ((theta / 2.0).sin(), (theta / 2.0).cos());
    let up = CVector::from_vec(vec![c(co, 0.0), c(phi.cos() * s, phi.sin() * s)]);
    let down = CVector::from_vec(vec![c(-phi.cos() * s, phi.sin() * s), c(co, 0.0)]);
    (up, down)
}

fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

/// Spin ⊗ path, path modes `{upper, lower}`; the particle enters through the
/// upper (central) port. The field routes `axis+` straight on and flips the
/// path of `axis−`.
///
/// Candidate `B` projects onto the spin along `axis` for a particle entering
/// through the central port; on the other port the roles are exchanged, which
/// keeps the observable complete.
pub fn stern_gerlach(axis: [f64; 3]) -> Result<Experiment> {
    let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidAxis(format!(
            "axis must be a unit vector, norm is {norm}"
        )));
    }
    let t = tol();
    let (up, down) = spin_basis(axis);
    let (pi_up, pi_down) = (outer(&up), outer(&down));
    let (upper, lower) = (basis_projector(2, &[0]), basis_projector(2, &[1]));

    let field = kron(&pi_up, &identity(2)) + kron(&pi_down, &pauli_x());
    let timeline = Timeline::single(field, &t)?;

    let spin_in = (&up + &down).unscale(2f64.sqrt());
    let initial = DensityOperator::pure(&spin_in.kronecker(&basis_vector(2, 0)))?;

    let dots = observable(
        vec![kron(&identity(2), &upper), kron(&identity(2), &lower)],
        &["upper-dot", "lower-dot"],
    )?;
    let b = observable(
        vec![
            kron(&pi_up, &upper) + kron(&pi_down, &lower),
            kron(&pi_down, &upper) + kron(&pi_up, &lower),
        ],
        &["spin+", "spin-"],
    )?;
    Experiment::new(initial, timeline, dots, vec![Candidate::new("B", "t_i", b)])
}

/// Spin ⊗ path with four path modes: upper half-space `{0, 1}` feeding the
/// x analyzer, lower half-space `{2, 3}` feeding the y analyzer. The particle
/// enters in path mode 0.
pub fn double_stern_gerlach() -> Result<Experiment> {
    let t = tol();
    let (zp, zm) = spin_basis([0.0, 0.0, 1.0]);
    let (xp, xm) = spin_basis([1.0, 0.0, 0.0]);
    let (yp, ym) = spin_basis([0.0, 1.0, 0.0]);

    // z−: swap the two half-spaces (0 ↔ 2, 1 ↔ 3)
    let mut half_swap = CMatrix::zeros(4, 4);
    for (a, b) in [(0, 2), (1, 3)] {
        half_swap[(a, b)] = ONE;
        half_swap[(b, a)] = ONE;
    }
    let route = kron(&outer(&zp), &identity(4)) + kron(&outer(&zm), &half_swap);

    let upper_half = basis_projector(4, &[0, 1]);
    let lower_half = basis_projector(4, &[2, 3]);
    let zero2 = CMatrix::zeros(2, 2);
    let upper_flip = direct_sum(&[&pauli_x(), &zero2]);
    let lower_flip = direct_sum(&[&zero2, &pauli_x()]);
    let analyze = kron(&outer(&xp), &upper_half)
        + kron(&outer(&xm), &upper_flip)
        + kron(&outer(&yp), &lower_half)
        + kron(&outer(&ym), &lower_flip);

    let timeline = Timeline::new(["t_i", "t_0", "t_f"], vec![route, analyze], &t)?;
    let initial = DensityOperator::pure(&xp.kronecker(&basis_vector(4, 0)))?;

    let dots = observable(
        (0..4)
            .map(|p| kron(&identity(2), &basis_projector(4, &[p])))
            .collect(),
        &["upper/x+", "upper/x-", "lower/y+", "lower/y-"],
    )?;
    let b = observable(
        vec![
            kron(&identity(2), &upper_half),
            kron(&identity(2), &lower_half),
        ],
        &["upper-half", "lower-half"],
    )?;
    Experiment::new(initial, timeline, dots, vec![Candidate::new("B", "t_0", b)])
}

/// `bins` screen positions; input modes 0 and 1 are the slits, the rest are
/// dark. Near screen: slit amplitudes `1/√N` and `e^{2πij/N}/√N` on bin `j`,
/// so the superposed amplitude is proportional to `1 + e^{iφ_j}` with `φ_j`
/// linear in `j`. Far screen: each slit lands in its own bin.
pub fn two_slit(bins: usize, interference_screen: bool) -> Result<Experiment> {
    if bins < 4 || !bins.is_multiple_of(2) {
        return Err(Error::ParameterOutOfRange(format!(
            "two-slit screen needs an even bin count ≥ 4, got {bins}"
        )));
    }
    let t = tol();
    let n = bins as f64;
    let screen = if interference_screen {
        let first = CVector::from_element(bins, c(1.0 / n.sqrt(), 0.0));
        let second = CVector::from_fn(bins, |j, _| {
            let phase = 2.0 * PI * j as f64 / n;
            c(phase.cos(), phase.sin()).unscale(n.sqrt())
        });
        orthonormal_completion(&[first, second], bins)
    } else {
        let targets = far_screen_targets(bins);
        let mut u = CMatrix::zeros(bins, bins);
        for (input, &bin) in targets.iter().enumerate() {
            u[(bin, input)] = ONE;
        }
        u
    };
    let timeline = Timeline::single(screen, &t)?;
    let ket = (basis_vector(bins, 0) + basis_vector(bins, 1)).unscale(2f64.sqrt());
    let initial = DensityOperator::pure(&ket)?;

    let bin_labels: Vec<String> = (0..bins).map(|j| format!("bin-{j}")).collect();
    let detectors = SpectralObservable::from_projectors(
        rank_one_family(bins, &(0..bins).collect::<Vec<_>>()),
        &t,
    )?
    .with_labels(bin_labels);
    let slit_labels: Vec<String> = (0..bins)
        .map(|i| match i {
            0 => "slit-1".to_string(),
            1 => "slit-2".to_string(),
            _ => format!("dark-{i}"),
        })
        .collect();
    let b = SpectralObservable::from_projectors(
        rank_one_family(bins, &(0..bins).collect::<Vec<_>>()),
        &t,
    )?
    .with_labels(slit_labels);
    Experiment::new(
        initial,
        timeline,
        detectors,
        vec![Candidate::new("B", "t_i", b)],
    )
}

/// Input mode → bin for the far screen: slits go to bins `N/4` and `3N/4`,
/// dark modes fill the remaining bins in ascending order.
fn far_screen_targets(bins: usize) -> Vec<usize> {
    let slit_bins = [bins / 4, 3 * bins / 4];
    let mut rest = (0..bins).filter(|b| !slit_bins.contains(b));
    let mut targets = slit_bins.to_vec();
    targets.extend(rest.by_ref());
    targets
}
