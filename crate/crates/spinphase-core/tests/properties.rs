//! Randomized invariant sweeps for the Hermitian toolbox, with a fixed
//! seed so failures reproduce.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinphase_core::{
    hermitian_eig, partial_trace, phase_align, schmidt_decompose, HermitianMatrix, StateVector,
    Subsystem, C64,
};

fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> HermitianMatrix {
    let entries: Vec<C64> = (0..dim * dim)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    HermitianMatrix::from_entries(dim, &entries).unwrap()
}

fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> StateVector {
    loop {
        let amps: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if let Ok(s) = StateVector::normalize(amps) {
            return s;
        }
    }
}

#[test]
fn eigensystem_invariants_over_1000_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for trial in 0..1000 {
        let m = random_hermitian(&mut rng, 4);
        let sys = hermitian_eig(&m).unwrap();
        let e = sys.energies();
        for w in e.windows(2) {
            assert!(w[0] <= w[1], "trial {trial}: energies not ascending");
        }
        for (k, psi) in sys.vectors().iter().enumerate() {
            let m_psi = m.apply(psi).unwrap();
            let res: f64 = m_psi
                .iter()
                .zip(psi.amplitudes())
                .map(|(a, b)| (a - e[k] * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res <= 1e-10, "trial {trial}: residual {res}");
            for (l, other) in sys.vectors().iter().enumerate() {
                let o = psi.inner(other).norm();
                let want = if k == l { 1.0 } else { 0.0 };
                assert!((o - want).abs() <= 1e-10, "trial {trial}: gram defect");
            }
        }
    }
}

#[test]
fn partial_trace_yields_valid_density_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..500 {
        let psi = random_state(&mut rng, 4);
        for keep in [Subsystem::One, Subsystem::Two] {
            // DensityMatrix construction itself enforces Hermiticity,
            // unit trace and positivity; just confirm it succeeds and
            // check the numbers once more from outside
            let rho = partial_trace(&psi, keep).unwrap();
            let tr = rho.matrix().trace();
            assert!((tr - 1.0).abs() <= 1e-12);
            let (lo, hi) = rho.eigenvalues();
            assert!(lo >= -1e-12 && hi <= 1.0 + 1e-12);
            let off = (rho.entry(0, 1) - rho.entry(1, 0).conj()).norm();
            assert!(off == 0.0);
        }
    }
}

#[test]
fn equal_purity_of_both_reductions() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..500 {
        let psi = random_state(&mut rng, 4);
        let p1 = partial_trace(&psi, Subsystem::One).unwrap().purity();
        let p2 = partial_trace(&psi, Subsystem::Two).unwrap().purity();
        assert!((p1 - p2).abs() <= 1e-12, "{p1} vs {p2}");
    }
}

#[test]
fn schmidt_reconstruction_over_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for _ in 0..500 {
        let psi = random_state(&mut rng, 4);
        let s = schmidt_decompose(&psi).unwrap();
        assert!((s.coefficients[0] + s.coefficients[1] - 1.0).abs() <= 1e-12);
        assert!(s.coefficients[0] >= s.coefficients[1]);
        // local bases orthonormal
        for basis in [&s.basis1, &s.basis2] {
            assert!(basis[0].inner(&basis[1]).norm() <= 1e-10);
            assert!((basis[0].norm() - 1.0).abs() <= 1e-12);
        }
        let rec = s.reconstruct();
        let err: f64 = rec
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(err <= 1e-10, "reconstruction error {err}");
    }
}

#[test]
fn phase_align_idempotent_over_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    for _ in 0..500 {
        let r = random_state(&mut rng, 4);
        let c = random_state(&mut rng, 4);
        let Ok(once) = phase_align(&r, &c) else {
            continue; // nearly orthogonal draw
        };
        let twice = phase_align(&r, &once).unwrap();
        let delta: f64 = once
            .amplitudes()
            .iter()
            .zip(twice.amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(delta <= 1e-14);
    }
}
