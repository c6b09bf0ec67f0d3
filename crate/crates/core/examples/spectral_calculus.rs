//! Evolution commutators, the Fourier functional calculus of a sinc profile
//! and the normalising function `(2/π) Si(x/σ)`.

use nccoarse::linalg::op_norm;
use nccoarse::rng::CounterRng;
use nccoarse::spectral::{
    evo_commutator_check, fourier_func_calc, lstar_fourier_check, normalizing_fn, FourierProfile,
};
use nccoarse::verify::oracles::sinc_of;
use nccoarse::{Operator, Tolerances};

fn main() -> nccoarse::Result<()> {
    let tol = Tolerances::default();
    let (d, a) = (Operator::pauli_z(), Operator::pauli_x());
    for t in [0.5, 1.0, 2.0] {
        let (lhs, rhs) = evo_commutator_check(&d, &a, t, &tol)?;
        println!("t = {t}: ||[e^itD, a]|| = {lhs:.6} <= |t| ||[D, a]|| = {rhs:.6}");
    }

    let d = CounterRng::new(2).gaussian_hermitian(5);
    let exact = sinc_of(&d, &tol);
    for nodes in [101, 401, 1601] {
        let (phi, bound) = fourier_func_calc(&d, &FourierProfile::sinc(nodes)?, &tol)?;
        println!("{nodes:>5} nodes: error {:.3e}, bound {bound:.6}", op_norm(&(&phi - &exact)));
    }
    let check = lstar_fourier_check(&d, &FourierProfile::sinc(2001)?, 20, 3, &tol)?;
    println!("||[sinc(D), a]|| / bound over {} samples: {:.4}", check.samples, check.max_ratio);

    let psi = normalizing_fn(0.5)?;
    println!("psi: odd {}, limits {:.6} / {:.6}", psi.odd, psi.asymptote_plus, psi.asymptote_minus);
    Ok(())
}
