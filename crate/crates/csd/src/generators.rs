//! Archimedean generator families.
//!
//! A generator φ: (0,1] → [0,∞) is strictly decreasing and convex with
//! φ(1) = 0; its inverse ψ = φ⁻¹ builds the copula C(u) = ψ(Σ φ(u_j)).
//! The copula density needs ψ⁽ᵈ⁾ and the score needs the ratio
//! ψ⁽ᵈ⁺¹⁾(t)/ψ⁽ᵈ⁾(t), which this module produces either in closed form
//! (Clayton, Independence) or by propagating a sign–log Taylor jet through
//! ψ's elementary-function program (Gumbel, Frank).
//!
//! Supported families and their generators (θ the dependence parameter):
//!
//! | family       | φ(u)                                   | ψ(t)                       |
//! |--------------|----------------------------------------|----------------------------|
//! | Clayton      | (u^{-θ} - 1)/θ, θ > 0                  | (1 + θt)^{-1/θ}            |
//! | Gumbel       | (-ln u)^θ, θ ≥ 1                       | exp(-t^{1/θ})              |
//! | Frank        | -ln[(e^{-θu}-1)/(e^{-θ}-1)], θ ≠ 0     | -ln(1+e^{-t}(e^{-θ}-1))/θ  |
//! | Independence | -ln u                                  | e^{-t}                     |

use serde::{Deserialize, Serialize};

use crate::error::{CsdError, Result};
use crate::jet::TaylorJet;
use crate::logsign::LogSigned;

/// Largest Taylor order `jet_psi` will propagate. Orders above this are
/// dominated by factorial scaling and fall outside the moderate-dimension
/// regime the score path targets (d ≤ 64, so ratio extraction needs d+1).
pub const MAX_JET_ORDER: usize = 65;

/// Parameter deviations below this snap the family to Independence,
/// removing the 0/0 limits at Clayton θ→0⁺, Gumbel θ=1 and Frank θ→0.
pub const INDEPENDENCE_SNAP: f64 = 1e-8;

/// Archimedean family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Clayton,
    Gumbel,
    Frank,
    Independence,
}

/// A validated generator: family plus dependence parameter.
///
/// Construct through [`GeneratorSpec::new`]; deserialization runs the same
/// validation. Near-boundary parameters are canonicalized to Independence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGeneratorSpec", into = "RawGeneratorSpec")]
pub struct GeneratorSpec {
    family: Family,
    theta: f64,
}

#[derive(Serialize, Deserialize)]
struct RawGeneratorSpec {
    family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
}

impl TryFrom<RawGeneratorSpec> for GeneratorSpec {
    type Error = CsdError;
    fn try_from(raw: RawGeneratorSpec) -> Result<Self> {
        match raw.family {
            Family::Independence => GeneratorSpec::new(Family::Independence, raw.theta.unwrap_or(0.0)),
            f => {
                let theta = raw.theta.ok_or_else(|| {
                    CsdError::InvalidParameter(format!("family {f:?} requires a theta parameter"))
                })?;
                GeneratorSpec::new(f, theta)
            }
        }
    }
}

impl From<GeneratorSpec> for RawGeneratorSpec {
    fn from(spec: GeneratorSpec) -> Self {
        let theta =
            if spec.family == Family::Independence { None } else { Some(spec.theta) };
        RawGeneratorSpec { family: spec.family, theta }
    }
}

impl GeneratorSpec {
    pub fn new(family: Family, theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(CsdError::InvalidParameter(format!("theta = {theta} is not finite")));
        }
        let spec = match family {
            Family::Clayton => {
                if theta <= 0.0 && theta.abs() >= INDEPENDENCE_SNAP {
                    return Err(CsdError::InvalidParameter(format!(
                        "Clayton requires theta > 0, got {theta}"
                    )));
                }
                if theta.abs() < INDEPENDENCE_SNAP {
                    Self::independence()
                } else {
                    Self { family, theta }
                }
            }
            Family::Gumbel => {
                if theta < 1.0 - INDEPENDENCE_SNAP {
                    return Err(CsdError::InvalidParameter(format!(
                        "Gumbel requires theta >= 1, got {theta}"
                    )));
                }
                if (theta - 1.0).abs() < INDEPENDENCE_SNAP {
                    Self::independence()
                } else {
                    Self { family, theta }
                }
            }
            Family::Frank => {
                if theta.abs() < INDEPENDENCE_SNAP {
                    Self::independence()
                } else {
                    Self { family, theta }
                }
            }
            Family::Independence => Self::independence(),
        };
        Ok(spec)
    }

    pub fn independence() -> Self {
        Self { family: Family::Independence, theta: 0.0 }
    }

    pub fn clayton(theta: f64) -> Result<Self> {
        Self::new(Family::Clayton, theta)
    }

    pub fn gumbel(theta: f64) -> Result<Self> {
        Self::new(Family::Gumbel, theta)
    }

    pub fn frank(theta: f64) -> Result<Self> {
        Self::new(Family::Frank, theta)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    fn check_unit(u: f64) -> Result<f64> {
        if u > 0.0 && u < 1.0 {
            Ok(u)
        } else {
            Err(CsdError::DomainViolation { value: u })
        }
    }

    /// Generator φ(u).
    pub fn phi(&self, u: f64) -> Result<f64> {
        let u = Self::check_unit(u)?;
        let th = self.theta;
        Ok(match self.family {
            Family::Independence => -u.ln(),
            // expm1 keeps φ accurate as u → 1 where u^{-θ} - 1 → 0.
            Family::Clayton => (-th * u.ln()).exp_m1() / th,
            Family::Gumbel => (-u.ln()).powf(th),
            Family::Frank => -((-th * u).exp_m1() / (-th).exp_m1()).ln(),
        })
    }

    /// First derivative φ′(u); strictly negative on (0,1).
    pub fn phi_d1(&self, u: f64) -> Result<f64> {
        let u = Self::check_unit(u)?;
        let th = self.theta;
        Ok(match self.family {
            Family::Independence => -1.0 / u,
            Family::Clayton => -u.powf(-th - 1.0),
            Family::Gumbel => -th * (-u.ln()).powf(th - 1.0) / u,
            Family::Frank => -th / (th * u).exp_m1(),
        })
    }

    /// Second derivative φ″(u); strictly positive for the supported families.
    pub fn phi_d2(&self, u: f64) -> Result<f64> {
        let u = Self::check_unit(u)?;
        let th = self.theta;
        Ok(match self.family {
            Family::Independence => 1.0 / (u * u),
            Family::Clayton => (th + 1.0) * u.powf(-th - 2.0),
            Family::Gumbel => {
                let l = -u.ln();
                th * l.powf(th - 2.0) * (th - 1.0 + l) / (u * u)
            }
            Family::Frank => {
                let e = (th * u).exp_m1();
                th * th * (th * u).exp() / (e * e)
            }
        })
    }

    /// Inverse generator ψ(t) = φ⁻¹(t), defined for t ≥ 0.
    pub fn psi(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(CsdError::InvalidParameter(format!("psi requires t >= 0, got {t}")));
        }
        let th = self.theta;
        Ok(match self.family {
            Family::Independence => (-t).exp(),
            Family::Clayton => (1.0 + th * t).powf(-1.0 / th),
            Family::Gumbel => (-t.powf(1.0 / th)).exp(),
            Family::Frank => -((-t).exp() * (-th).exp_m1()).ln_1p() / th,
        })
    }

    /// ψ as a sign–log Taylor jet at `t`, through the family's
    /// elementary-function program.
    fn psi_log_jet(&self, t: f64, order: usize) -> TaylorJet<LogSigned> {
        let th = self.theta;
        let x = TaylorJet::<LogSigned>::variable(t, order);
        match self.family {
            Family::Independence => x.neg().exp(),
            Family::Clayton => x.scale(th).add_scalar(1.0).powf(-1.0 / th),
            Family::Gumbel => x.powf(1.0 / th).neg().exp(),
            Family::Frank => {
                let q = (-th).exp_m1(); // e^{-θ} - 1
                x.neg().exp().scale(q).add_scalar(1.0).ln().scale(-1.0 / th)
            }
        }
    }

    /// Taylor coefficients of ψ at `t` through `order`; coefficient j times j!
    /// equals ψ⁽ʲ⁾(t).
    pub fn jet_psi(&self, t: f64, order: usize) -> Result<TaylorJet<f64>> {
        if order > MAX_JET_ORDER {
            return Err(CsdError::InvalidParameter(format!(
                "jet order {order} exceeds cap {MAX_JET_ORDER}"
            )));
        }
        if !(t >= 0.0) {
            return Err(CsdError::InvalidParameter(format!("jet_psi requires t >= 0, got {t}")));
        }
        self.psi_log_jet(t, order).to_f64_jet()
    }

    /// The score ratio ψ⁽ᵈ⁺¹⁾(t)/ψ⁽ᵈ⁾(t).
    ///
    /// Clayton and Independence use closed forms; Gumbel and Frank extract the
    /// ratio from a sign–log jet of order d+1, so it stays finite even when
    /// ψ⁽ᵈ⁾ itself underflows f64.
    pub fn psi_ratio(&self, t: f64, d: usize) -> Result<f64> {
        if d < 1 {
            return Err(CsdError::InvalidParameter("psi_ratio requires d >= 1".into()));
        }
        if !(t >= 0.0) {
            return Err(CsdError::InvalidParameter(format!("psi_ratio requires t >= 0, got {t}")));
        }
        match self.family {
            Family::Independence => Ok(-1.0),
            // ψ^{(k)}(t) = (-1)^k (1+θt)^{-1/θ-k} Π_{i<k}(1+iθ), so the ratio
            // telescopes to -(1+dθ)/(1+θt).
            Family::Clayton => Ok(-(1.0 + d as f64 * self.theta) / (1.0 + self.theta * t)),
            Family::Gumbel | Family::Frank => self.psi_ratio_jet(t, d),
        }
    }

    /// Jet-path ratio, also used as a cross-check for the Clayton closed form.
    pub fn psi_ratio_jet(&self, t: f64, d: usize) -> Result<f64> {
        if d + 1 > MAX_JET_ORDER {
            return Err(CsdError::InvalidParameter(format!(
                "psi_ratio derivative order {} exceeds cap {MAX_JET_ORDER}",
                d + 1
            )));
        }
        let jet = self.psi_log_jet(t, d + 1);
        let c_d = jet.coefficients[d];
        let c_d1 = jet.coefficients[d + 1];
        if c_d.is_zero() {
            return Err(CsdError::Numeric(format!(
                "psi^({d}) vanished at t = {t}; ratio undefined"
            )));
        }
        // ψ^{(d+1)}/ψ^{(d)} = (d+1)! c_{d+1} / (d! c_d) = (d+1) c_{d+1}/c_d
        Ok(c_d1.div(c_d).to_f64() * (d + 1) as f64)
    }

    /// ln |ψ⁽ᵈ⁾(t)| together with its sign, for density evaluation.
    pub fn psi_deriv_log(&self, t: f64, d: usize) -> Result<LogSigned> {
        match self.family {
            Family::Independence => {
                Ok(LogSigned::from_parts(if d % 2 == 0 { 1 } else { -1 }, -t))
            }
            Family::Clayton => {
                let th = self.theta;
                let mut log_abs = (-1.0 / th - d as f64) * (th * t).ln_1p();
                for i in 0..d {
                    log_abs += (1.0 + i as f64 * th).ln();
                }
                Ok(LogSigned::from_parts(if d % 2 == 0 { 1 } else { -1 }, log_abs))
            }
            Family::Gumbel | Family::Frank => {
                if d > MAX_JET_ORDER {
                    return Err(CsdError::InvalidParameter(format!(
                        "derivative order {d} exceeds cap {MAX_JET_ORDER}"
                    )));
                }
                let jet = self.psi_log_jet(t, d);
                let mut log_fact = 0.0;
                for i in 2..=d {
                    log_fact += (i as f64).ln();
                }
                let c = jet.coefficients[d];
                Ok(LogSigned::from_parts(c.sign, c.log_abs + log_fact))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::richardson_fd;
    use approx::assert_relative_eq;

    const FAMILIES: &[(Family, f64)] = &[
        (Family::Clayton, 2.5),
        (Family::Gumbel, 2.5),
        (Family::Frank, 2.5),
        (Family::Independence, 0.0),
    ];

    #[test]
    fn phi_clayton_hand_checked() {
        let g = GeneratorSpec::clayton(1.0).unwrap();
        assert_relative_eq!(g.phi(0.5).unwrap(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn phi_vanishes_at_one() {
        for &(f, th) in FAMILIES {
            let g = GeneratorSpec::new(f, th).unwrap();
            let v = g.phi(1.0 - 1e-13).unwrap();
            assert!(v.abs() < 1e-10, "{f:?}: phi(1-) = {v}");
        }
    }

    #[test]
    fn phi_frank_textbook_form() {
        let g = GeneratorSpec::frank(2.0).unwrap();
        let u = 0.3;
        let expect = -(((-2.0f64 * u).exp() - 1.0) / ((-2.0f64).exp() - 1.0)).ln();
        assert_relative_eq!(g.phi(u).unwrap(), expect, max_relative = 1e-13);
    }

    #[test]
    fn phi_derivatives_clayton_symbolic() {
        let g = GeneratorSpec::clayton(1.0).unwrap();
        assert_relative_eq!(g.phi_d1(0.5).unwrap(), -4.0, max_relative = 1e-13);
        assert_relative_eq!(g.phi_d2(0.5).unwrap(), 16.0, max_relative = 1e-13);
    }

    #[test]
    fn phi_derivative_signs_on_grid() {
        for &(f, th) in FAMILIES {
            let g = GeneratorSpec::new(f, th).unwrap();
            for i in 1..40 {
                let u = i as f64 / 40.0;
                assert!(g.phi_d1(u).unwrap() < 0.0, "{f:?} phi' at {u}");
                assert!(g.phi_d2(u).unwrap() > 0.0, "{f:?} phi'' at {u}");
            }
        }
    }

    #[test]
    fn phi_derivatives_match_finite_differences() {
        let u = 0.37;
        for &(f, _) in FAMILIES {
            let g = GeneratorSpec::new(f, if f == Family::Independence { 0.0 } else { 2.5 })
                .unwrap();
            let h = 1e-5;
            let fd1 = (g.phi(u + h).unwrap() - g.phi(u - h).unwrap()) / (2.0 * h);
            let fd2 = (g.phi(u + h).unwrap() - 2.0 * g.phi(u).unwrap() + g.phi(u - h).unwrap())
                / (h * h);
            let a1 = g.phi_d1(u).unwrap();
            let a2 = g.phi_d2(u).unwrap();
            assert!(((a1 - fd1) / a1).abs() < 1e-7, "{f:?} phi': {a1} vs {fd1}");
            assert!(((a2 - fd2) / a2).abs() < 1e-5, "{f:?} phi'': {a2} vs {fd2}");
        }
    }

    #[test]
    fn phi_psi_roundtrip() {
        for &(f, th) in FAMILIES {
            let g = GeneratorSpec::new(f, th).unwrap();
            let mut t = 1e-6;
            while t <= 50.0 {
                let u = g.psi(t).unwrap();
                if u > 0.0 && u < 1.0 {
                    assert_relative_eq!(g.phi(u).unwrap(), t, max_relative = 1e-10);
                }
                t *= 3.3;
            }
        }
    }

    #[test]
    fn psi_ratio_clayton_values() {
        let g = GeneratorSpec::clayton(1.0).unwrap();
        // psi = (1+t)^{-1}: psi'''/psi'' = -3/(1+t)
        assert_relative_eq!(g.psi_ratio(1.0, 2).unwrap(), -1.5, max_relative = 1e-13);
    }

    #[test]
    fn psi_ratio_independence_constant() {
        let g = GeneratorSpec::independence();
        for d in 1..20 {
            for &t in &[0.0, 0.3, 5.0, 40.0] {
                assert_relative_eq!(g.psi_ratio(t, d).unwrap(), -1.0, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn clayton_jet_path_matches_closed_form() {
        // 100 (θ, t, d) triples; relative 1e-10.
        let thetas = [0.3, 0.8, 1.5, 3.0, 6.0];
        let ts = [0.05, 0.4, 1.7, 9.0];
        let ds = [1, 2, 3, 5, 8];
        let mut count = 0;
        for &th in &thetas {
            let g = GeneratorSpec::clayton(th).unwrap();
            for &t in &ts {
                for &d in &ds {
                    let closed = g.psi_ratio(t, d).unwrap();
                    let jet = g.psi_ratio_jet(t, d).unwrap();
                    assert_relative_eq!(jet, closed, max_relative = 1e-10);
                    count += 1;
                }
            }
        }
        assert_eq!(count, 100);
    }

    #[test]
    fn jet_psi_known_series() {
        // Independence at t=0: e^{-t} -> [1, -1, 1/2, -1/6]
        let g = GeneratorSpec::independence();
        let j = g.jet_psi(0.0, 3).unwrap();
        let expect = [1.0, -1.0, 0.5, -1.0 / 6.0];
        for (k, e) in expect.iter().enumerate() {
            assert_relative_eq!(j.coefficients[k], *e, epsilon = 1e-14);
        }
        // Clayton θ=1 at t=1: (1+t)^{-1} -> [1/2, -1/4, 1/8, -1/16]
        let g = GeneratorSpec::clayton(1.0).unwrap();
        let j = g.jet_psi(1.0, 3).unwrap();
        let expect = [0.5, -0.25, 0.125, -0.0625];
        for (k, e) in expect.iter().enumerate() {
            assert_relative_eq!(j.coefficients[k], *e, max_relative = 1e-12);
        }
    }

    #[test]
    fn jet_psi_first_coefficient_matches_fd() {
        let g = GeneratorSpec::gumbel(2.0).unwrap();
        let j = g.jet_psi(1.0, 3).unwrap();
        let h = 1e-5;
        let fd = (g.psi(1.0 + h).unwrap() - g.psi(1.0 - h).unwrap()) / (2.0 * h);
        assert!((j.coefficients[1] - fd).abs() / fd.abs() < 1e-7);
    }

    #[test]
    fn psi_ratio_matches_richardson_fd() {
        // Jets vs high-precision central differences of ψ, relative 1e-5,
        // for every family on a (θ, t, d) grid.
        for &(fam, _) in FAMILIES {
            let thetas: &[f64] = match fam {
                Family::Independence => &[0.0],
                Family::Gumbel => &[1.4, 2.5, 4.0],
                _ => &[0.6, 1.2, 2.0],
            };
            for &th in thetas {
                let g = GeneratorSpec::new(fam, th).unwrap();
                // t away from the ψ singularity so the FD oracle itself is
                // comfortably below the 1e-5 budget (its floor grows as the
                // stencil approaches the singular point).
                for &t in &[1.5, 2.5, 4.0] {
                    for d in 1..=6usize {
                        let psi = |x: f64| g.psi(x).unwrap();
                        let num = richardson_fd(&psi, t, d + 1);
                        let den = richardson_fd(&psi, t, d);
                        let fd_ratio = num / den;
                        let ratio = g.psi_ratio(t, d).unwrap();
                        assert!(
                            ((ratio - fd_ratio) / ratio).abs() < 1e-5,
                            "{fam:?} θ={th} t={t} d={d}: jet {ratio} vs fd {fd_ratio}"
                        );
                    }
                }
            }
        }
    }

    // Independent recurrence oracles: for Gumbel, ψ^{(d)}(t) = ψ(t) Σ_k c_{d,k} t^{kα-d}
    // with c_{d+1,k} = -α c_{d,k-1} + (kα-d) c_{d,k}; for Frank, ψ^{(d)} = y^{(d-1)}/θ
    // where y = w/(1+w) satisfies y' = y² - y, so derivatives stay polynomials in y.
    fn gumbel_psi_deriv_oracle(th: f64, t: f64, d: usize) -> f64 {
        let alpha = 1.0 / th;
        let mut c = vec![0.0f64; d + 1];
        c[1] = -alpha;
        for m in 1..d {
            let mut next = vec![0.0f64; d + 1];
            for k in 1..=m {
                next[k + 1] += -alpha * c[k];
                next[k] += (k as f64 * alpha - m as f64) * c[k];
            }
            c = next;
        }
        let psi = (-t.powf(alpha)).exp();
        let mut q = 0.0;
        for (k, ck) in c.iter().enumerate().skip(1) {
            q += ck * t.powf(k as f64 * alpha - d as f64);
        }
        psi * q
    }

    fn frank_psi_deriv_oracle(th: f64, t: f64, d: usize) -> f64 {
        assert!(d >= 1);
        let w = (-t).exp() * (-th).exp_m1();
        let y = w / (1.0 + w);
        // y^{(m)} as polynomial in y: b_{m+1} from b_m via y' = y² - y.
        let mut b = vec![0.0f64; d + 1];
        b[1] = 1.0; // y^{(0)} = y
        for _ in 0..(d - 1) {
            let mut next = vec![0.0f64; d + 1];
            for k in 1..d {
                if b[k] != 0.0 {
                    next[k + 1] += b[k] * k as f64;
                    next[k] -= b[k] * k as f64;
                }
            }
            b = next;
        }
        let mut val = 0.0;
        for (k, bk) in b.iter().enumerate().skip(1) {
            val += bk * y.powi(k as i32);
        }
        val / th
    }

    #[test]
    fn gumbel_jets_match_recurrence_oracle() {
        let g = GeneratorSpec::gumbel(2.3).unwrap();
        for &t in &[0.2, 1.0, 4.0, 20.0] {
            for d in 1..=8usize {
                let jet = g.jet_psi(t, d).unwrap().derivative(d);
                let oracle = gumbel_psi_deriv_oracle(2.3, t, d);
                assert_relative_eq!(jet, oracle, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn frank_jets_match_recurrence_oracle() {
        let g = GeneratorSpec::frank(3.0).unwrap();
        for &t in &[0.2, 1.0, 4.0, 20.0] {
            for d in 1..=8usize {
                let jet = g.jet_psi(t, d).unwrap().derivative(d);
                let oracle = frank_psi_deriv_oracle(3.0, t, d);
                assert_relative_eq!(jet, oracle, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn complete_monotonicity_sign_pattern() {
        // (-1)^k ψ^{(k)} >= 0 for all supported families (θ > 0).
        for &(fam, th) in
            &[(Family::Clayton, 3.0), (Family::Gumbel, 2.0), (Family::Frank, 4.0), (Family::Independence, 0.0)]
        {
            let g = GeneratorSpec::new(fam, th).unwrap();
            for &t in &[0.1, 0.9, 3.0, 15.0] {
                for d in 0..=7usize {
                    let v = g.psi_deriv_log(t, d).unwrap();
                    let expect_sign = if d % 2 == 0 { 1 } else { -1 };
                    assert!(
                        v.sign == expect_sign || v.is_zero(),
                        "{fam:?} t={t} d={d}: sign {}",
                        v.sign
                    );
                }
            }
        }
    }

    #[test]
    fn psi_ratio_survives_underflow_regime() {
        // Gumbel at large t: ψ^{(d)} underflows f64 well before d = 40, but
        // the log-signed ratio stays finite.
        let g = GeneratorSpec::gumbel(1.5).unwrap();
        let r = g.psi_ratio(400.0, 40).unwrap();
        assert!(r.is_finite() && r < 0.0, "ratio {r}");
    }

    #[test]
    fn jet_overflow_is_reported_not_inf() {
        // Gumbel derivatives at tiny t blow up like t^{k/θ - k}; the f64
        // lowering must fail loudly while the log-signed ratio stays usable.
        let g = GeneratorSpec::gumbel(2.0).unwrap();
        match g.jet_psi(1e-9, 60) {
            Err(CsdError::Overflow { log_abs }) => assert!(log_abs > 709.0),
            other => panic!("expected overflow error, got {other:?}"),
        }
        let ratio = g.psi_ratio(1e-9, 59).unwrap();
        assert!(ratio.is_finite());
    }

    #[test]
    fn boundary_parameters_snap_to_independence() {
        assert_eq!(GeneratorSpec::clayton(1e-12).unwrap().family(), Family::Independence);
        assert_eq!(GeneratorSpec::gumbel(1.0).unwrap().family(), Family::Independence);
        assert_eq!(GeneratorSpec::frank(-1e-12).unwrap().family(), Family::Independence);
        assert_eq!(GeneratorSpec::clayton(0.5).unwrap().family(), Family::Clayton);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(GeneratorSpec::clayton(-1.0).is_err());
        assert!(GeneratorSpec::gumbel(0.7).is_err());
        assert!(GeneratorSpec::new(Family::Clayton, f64::NAN).is_err());
        let g = GeneratorSpec::clayton(1.0).unwrap();
        assert!(g.phi(0.0).is_err());
        assert!(g.phi(1.0).is_err());
        assert!(g.phi(1.5).is_err());
    }

    #[test]
    fn spec_json_roundtrip() {
        let g = GeneratorSpec::clayton(2.0).unwrap();
        let js = serde_json::to_string(&g).unwrap();
        assert_eq!(js, r#"{"family":"clayton","theta":2.0}"#);
        let back: GeneratorSpec = serde_json::from_str(&js).unwrap();
        assert_eq!(back, g);
        let ind: GeneratorSpec = serde_json::from_str(r#"{"family":"independence"}"#).unwrap();
        assert_eq!(ind.family(), Family::Independence);
        assert!(serde_json::from_str::<GeneratorSpec>(r#"{"family":"gumbel","theta":0.2}"#).is_err());
    }
}
