//! Key recovery for MOR over UT(n, p).
//!
//! The public pair `(phi, phi^m)` induces `(A, A^m)` on the Frattini
//! quotient. The matrix DLP splits along the irreducible factors of the
//! characteristic polynomial of `A`: each eigenvalue `lam` in `F_{p^d}` gives
//! `lam^m = mu`, solved in the unit group of that field, and a nontrivial
//! Jordan block adds `m mod p`. CRT yields `m mod ord(A)`.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::dlp::{
    crt_combine, element_order, factor_integer, matrix_order, solve, ExtUnits, FactoredInteger,
    Residue, SolverConfig,
};
use crate::error::{Error, Result};
use crate::ff::{factor_poly, ExtElem, ExtField, Poly};
use crate::linalg::{char_poly, jordan_exponent_residue, proportionality, MatrixExt, MatrixFp};
use crate::morsys::{element_to_value, params_to_value, Ciphertext, PublicKey};
use crate::rng::SplitMix64;
use crate::utgroup::{frattini_project, FrattiniVector, UtElement};

/// Search bound for lifting a residue from the CRT modulus to `ord(A)`.
const LIFT_LIMIT: u64 = 1 << 20;

/// `B = A^m` with both matrices invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlDlpInstance {
    a: MatrixFp,
    b: MatrixFp,
}

impl GlDlpInstance {
    pub fn new(a: MatrixFp, b: MatrixFp) -> Result<Self> {
        if a.field() != b.field() {
            return Err(Error::ModulusMismatch(a.field().modulus(), b.field().modulus()));
        }
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch(format!("{} vs {}", a.dim(), b.dim())));
        }
        a.inv()?;
        b.inv()?;
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &MatrixFp {
        &self.a
    }

    pub fn b(&self) -> &MatrixFp {
        &self.b
    }
}

/// Projects a public key to the quotient: `A = phi'`, `B = (phi^m)'`.
pub fn reduce_mor_to_gl(pk: &PublicKey) -> Result<GlDlpInstance> {
    let a = pk.phi().induced_map();
    let b = pk.phi_m().induced_map();
    if a.inv().is_err() || b.inv().is_err() {
        return Err(Error::NonInvertibleInducedMap);
    }
    GlDlpInstance::new(a, b)
}

/// One irreducible factor of the characteristic polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorReport {
    pub factor: Poly,
    pub degree: usize,
    pub multiplicity: usize,
    /// `m mod ord(lam)`.
    pub residue: Residue,
    /// `lam^residue = mu` re-checked in `F_{p^d}`.
    pub verified: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Timings {
    pub reduce: Duration,
    pub factor: Duration,
    pub dlp: Duration,
    pub jordan: Duration,
    pub combine: Duration,
    pub order_check: Duration,
    pub decrypt: Duration,
}

impl Timings {
    pub fn total(&self) -> Duration {
        self.reduce + self.factor + self.dlp + self.jordan + self.combine + self.order_check + self.decrypt
    }

    fn to_value(self) -> Value {
        let us = |d: Duration| d.as_micros() as u64;
        json!({
            "combine": us(self.combine),
            "decrypt": us(self.decrypt),
            "dlp": us(self.dlp),
            "factor": us(self.factor),
            "jordan": us(self.jordan),
            "order_check": us(self.order_check),
            "reduce": us(self.reduce),
            "total": us(self.total()),
        })
    }
}

/// Result of solving `A^m = B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlDlpReport {
    /// `m mod M` with `M = ord(A)`; `A^recovered = B` has been checked.
    pub recovered: Residue,
    pub per_factor: Vec<FactorReport>,
    /// `m mod p` from Jordan chains.
    pub jordan_residues: Vec<Residue>,
    /// The CRT modulus fell short of `ord(A)` and was lifted by search.
    pub lifted: bool,
    pub timings: Timings,
}

impl GlDlpReport {
    pub fn modulus(&self) -> &BigUint {
        self.recovered.modulus()
    }
}

fn field_label(p: u64, d: usize) -> String {
    if d == 1 {
        format!("F_{p}")
    } else {
        format!("F_{p}^{d}")
    }
}

/// Solves `A^m = B` through eigenvalue DLPs in extension fields.
pub fn gl_dlp(instance: &GlDlpInstance, config: &SolverConfig) -> Result<GlDlpReport> {
    let (a, b) = (&instance.a, &instance.b);
    let p = a.field().modulus();
    let mut timings = Timings::default();

    let clock = Instant::now();
    let factorization = factor_poly(&char_poly(a), &mut SplitMix64::new(0));
    timings.factor = clock.elapsed();

    let mut per_factor = Vec::new();
    let mut jordan_residues = Vec::new();
    for (f, multiplicity) in &factorization.factors {
        let clock = Instant::now();
        let ctx = ExtField::new(f.clone())?;
        let d = ctx.degree();
        let lam = ExtElem::generator(&ctx);
        let big_a = MatrixExt::from_fp(a, &ctx)?;
        let big_b = MatrixExt::from_fp(b, &ctx)?;
        let v = big_a
            .sub_scalar(&lam)?
            .kernel_basis()
            .into_iter()
            .next()
            .ok_or_else(|| Error::Inconsistent(format!("no eigenvector for the root of {f}")))?;
        let mu = proportionality(&big_b.mul_vec(&v)?, &v)?;
        if mu.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let group = ExtUnits(ctx.clone());
        let units = factor_integer(&ctx.unit_order())?;
        let order = element_order(&group, &lam, &units)?;
        let residue = solve(config, &group, &lam, &mu, &order).map_err(|e| match e {
            Error::ResourceLimit(msg) => Error::ResourceLimit(format!(
                "eigenvalue DLP in {} (unit group order {}): {msg}",
                field_label(p, d),
                ctx.unit_order()
            )),
            Error::NoSolution(_) => Error::Inconsistent(format!(
                "eigenvalue of B for the root of {f} is not a power of the eigenvalue of A"
            )),
            other => other,
        })?;
        let verified = lam.pow(residue.r()) == mu;
        per_factor.push(FactorReport {
            factor: f.clone(),
            degree: d,
            multiplicity: *multiplicity,
            residue,
            verified,
        });
        timings.dlp += clock.elapsed();

        if *multiplicity >= 2 {
            let clock = Instant::now();
            if let Some(r) = jordan_exponent_residue(a, b, &lam)? {
                jordan_residues.push(Residue::from_u64(r, p)?);
            }
            timings.jordan += clock.elapsed();
        }
    }

    let clock = Instant::now();
    let parts: Vec<Residue> = per_factor
        .iter()
        .map(|f| f.residue.clone())
        .chain(jordan_residues.iter().cloned())
        .collect();
    let mut recovered = if parts.is_empty() {
        Residue::default()
    } else {
        crt_combine(&parts)?
    };
    let full = matrix_order(a)?;
    let mut lifted = false;
    if recovered.modulus() != full.value() {
        recovered = lift(a, b, &recovered, full.value())?;
        lifted = true;
    }
    if a.pow(recovered.r()) != *b {
        return Err(Error::Inconsistent("A^m does not reproduce B".into()));
    }
    timings.combine = clock.elapsed();

    Ok(GlDlpReport { recovered, per_factor, jordan_residues, lifted, timings })
}

/// Finds `r + kM` with `A^(r + kM) = B`, `0 <= k < full / M`.
fn lift(a: &MatrixFp, b: &MatrixFp, partial: &Residue, full: &BigUint) -> Result<Residue> {
    let steps = full / partial.modulus();
    if steps > BigUint::from(LIFT_LIMIT) {
        return Err(Error::ResourceLimit(format!(
            "lifting the residue needs {steps} trials, limit {LIFT_LIMIT}"
        )));
    }
    let stride = a.pow(partial.modulus());
    let mut acc = a.pow(partial.r());
    let mut e = partial.r().clone();
    for _ in 0..steps.to_u64().expect("below limit") {
        if acc == *b {
            return Residue::new(e, full.clone());
        }
        acc = acc.mul(&stride)?;
        e += partial.modulus();
    }
    Err(Error::Inconsistent("B is not a power of A".into()))
}

/// Full attack on a public key and a batch of ciphertexts.
#[derive(Debug, Clone)]
pub struct AttackReport {
    pub gl: GlDlpReport,
    /// `ord(phi)`, computed from the public key.
    pub automorphism_order: BigUint,
    /// Whether `phi^M = id`, in which case `m` is determined completely.
    pub full_order_match: bool,
    /// `M = 1`: the key gives away nothing to recover.
    pub degenerate: bool,
    pub plaintexts: Vec<UtElement>,
    /// First superdiagonal of each plaintext, recovered by linear algebra
    /// on the quotient alone.
    pub quotient_leaks: Vec<FrattiniVector>,
    pub timings: Timings,
}

impl AttackReport {
    pub fn recovered(&self) -> &Residue {
        &self.gl.recovered
    }

    pub fn modulus(&self) -> &BigUint {
        self.gl.modulus()
    }

    pub fn to_value(&self, pk: &PublicKey, config: &SolverConfig) -> Value {
        let per_factor: Vec<Value> = self
            .gl
            .per_factor
            .iter()
            .map(|f| {
                json!({
                    "degree": f.degree,
                    "factor": f.factor.to_string(),
                    "modulus": f.residue.modulus().to_string(),
                    "multiplicity": f.multiplicity,
                    "residue": f.residue.r().to_string(),
                    "verified": f.verified,
                })
            })
            .collect();
        let jordan: Vec<Value> = self
            .gl
            .jordan_residues
            .iter()
            .map(|r| json!({ "modulus": r.modulus().to_string(), "residue": r.r().to_string() }))
            .collect();
        json!({
            "automorphism_order": self.automorphism_order.to_string(),
            "degenerate": self.degenerate,
            "full_order_match": self.full_order_match,
            "jordan_residues": jordan,
            "lifted": self.gl.lifted,
            "modulus": self.modulus().to_string(),
            "params": params_to_value(pk.params()),
            "per_factor": per_factor,
            "plaintexts": self.plaintexts.iter().map(element_to_value).collect::<Vec<_>>(),
            "quotient_leaks": self.quotient_leaks.iter().map(|v| v.coords().to_vec()).collect::<Vec<_>>(),
            "recovered": self.recovered().r().to_string(),
            "solver": config.solver.to_string(),
            "timings_us": self.timings.to_value(),
        })
    }
}

/// Recovers `m mod M` from the public key, then decrypts each challenge with
/// the recovered exponent. The plaintexts are exact whenever `m` is
/// determined modulo the order of the challenge's `phi^r`, in particular
/// whenever `full_order_match` holds.
pub fn break_mor(pk: &PublicKey, challenges: &[Ciphertext], config: &SolverConfig) -> Result<AttackReport> {
    if challenges.iter().any(|c| c.params() != pk.params()) {
        return Err(Error::ParamsMismatch);
    }
    let clock = Instant::now();
    let instance = reduce_mor_to_gl(pk)?;
    let reduce = clock.elapsed();

    let gl = gl_dlp(&instance, config)?;
    let m_hat = gl.recovered.r().clone();
    let big_m = gl.modulus().clone();

    let clock = Instant::now();
    let phi = pk.phi();
    let full_order_match = phi.compose_power(&big_m).is_identity();
    let automorphism_order: FactoredInteger = phi.order();
    let t = automorphism_order.value().clone();
    let order_check = clock.elapsed();

    let clock = Instant::now();
    let mut plaintexts = Vec::with_capacity(challenges.len());
    let mut quotient_leaks = Vec::with_capacity(challenges.len());
    for ct in challenges {
        let phi_r = ct.phi_r();
        let unmask = if phi_r.compose_power(&t).is_identity() {
            phi_r.compose_power(&((&t - (&m_hat % &t)) % &t))
        } else {
            phi_r.compose_power(&m_hat).inverse()
        };
        plaintexts.push(unmask.apply(ct.masked())?);

        let a_r_inv = phi_r.induced_map().inv().map_err(|_| Error::NonInvertibleInducedMap)?;
        let coords = a_r_inv
            .pow(&m_hat)
            .mul_vec(frattini_project(ct.masked()).coords())?;
        let leak = UtElement::from_canonical(ct.params(), &pad(&coords, ct.params().root_count()))?;
        quotient_leaks.push(frattini_project(&leak));
    }
    let decrypt = clock.elapsed();

    let timings = Timings { reduce, order_check, decrypt, ..gl.timings };
    Ok(AttackReport {
        degenerate: big_m.is_one(),
        gl,
        automorphism_order: t,
        full_order_match,
        plaintexts,
        quotient_leaks,
        timings,
    })
}

fn pad(prefix: &[u64], len: usize) -> Vec<u64> {
    let mut v = prefix.to_vec();
    v.resize(len, 0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dlp::Solver;
    use crate::ff::PrimeField;
    use crate::morsys::{encrypt, keygen, keypair_from, KeyFamily};
    use crate::utgroup::{Automorphism, GroupParams};

    fn mat(p: u64, rows: &[&[u64]]) -> MatrixFp {
        let f = PrimeField::new(p).unwrap();
        MatrixFp::from_rows(f, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn diagonal_instance() {
        let inst = GlDlpInstance::new(mat(5, &[&[3, 0], &[0, 2]]), mat(5, &[&[2, 0], &[0, 3]])).unwrap();
        let r = gl_dlp(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(r.recovered, Residue::from_u64(3, 4).unwrap());
        let residues: Vec<_> = r.per_factor.iter().map(|f| f.residue.clone()).collect();
        assert_eq!(residues, vec![Residue::from_u64(3, 4).unwrap(); 2]);
    }

    #[test]
    fn irreducible_quadratic_instance() {
        let a = mat(5, &[&[0, 4], &[2, 0]]);
        let b = a.pow_u64(7);
        let inst = GlDlpInstance::new(a.clone(), b.clone()).unwrap();
        let r = gl_dlp(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(r.per_factor.len(), 1);
        assert_eq!(r.per_factor[0].degree, 2);
        assert!(r.per_factor[0].verified);
        let ord = (1..=24u64).find(|&e| a.pow_u64(e).is_identity()).unwrap();
        assert_eq!(r.recovered, Residue::from_u64(7 % ord, ord).unwrap());
        let brute: Vec<u64> = (0..ord).filter(|&e| a.pow_u64(e) == b).collect();
        assert_eq!(brute, vec![7 % ord]);
    }

    #[test]
    fn jordan_instance() {
        let a = mat(5, &[&[1, 1], &[0, 1]]);
        let inst = GlDlpInstance::new(a.clone(), a.pow_u64(4)).unwrap();
        let r = gl_dlp(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(r.recovered, Residue::from_u64(4, 5).unwrap());
        assert_eq!(r.jordan_residues, vec![Residue::from_u64(4, 5).unwrap()]);
        assert!(!r.lifted);
    }

    #[test]
    fn jordan_block_longer_than_p_is_lifted() {
        // A 3x3 unipotent block over F_2 has order 4; the chain gives m mod 2.
        let a = mat(2, &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        for m in 0..4u64 {
            let inst = GlDlpInstance::new(a.clone(), a.pow_u64(m)).unwrap();
            let r = gl_dlp(&inst, &SolverConfig::default()).unwrap();
            assert_eq!(r.recovered, Residue::from_u64(m, 4).unwrap());
            assert!(r.lifted);
        }
    }

    #[test]
    fn identity_instance_is_degenerate() {
        let a = mat(7, &[&[1, 0], &[0, 1]]);
        let r = gl_dlp(&GlDlpInstance::new(a.clone(), a).unwrap(), &SolverConfig::default()).unwrap();
        assert_eq!(r.recovered, Residue::default());
    }

    #[test]
    fn non_power_is_reported() {
        let a = mat(7, &[&[3, 0], &[0, 3]]);
        let b = mat(7, &[&[2, 0], &[0, 3]]);
        let err = gl_dlp(&GlDlpInstance::new(a, b).unwrap(), &SolverConfig::default()).unwrap_err();
        assert!(matches!(err, Error::EigenvectorMismatch(_) | Error::Inconsistent(_)), "{err:?}");
        // 6 generates F_7^* only to order 2, and 3 is not a power of it.
        let a = mat(7, &[&[6, 0], &[0, 1]]);
        let b = mat(7, &[&[3, 0], &[0, 1]]);
        let err = gl_dlp(&GlDlpInstance::new(a, b).unwrap(), &SolverConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Inconsistent(_)), "{err:?}");
        assert!(GlDlpInstance::new(mat(7, &[&[1, 1], &[1, 1]]), mat(7, &[&[1, 0], &[0, 1]])).is_err());
    }

    #[test]
    fn ceiling_names_the_field() {
        let a = mat(10007, &[&[0, 1], &[3, 0]]);
        let inst = GlDlpInstance::new(a.clone(), a.pow_u64(1234)).unwrap();
        let cfg = SolverConfig::new(Solver::Bsgs).with_ceiling(big(10));
        match gl_dlp(&inst, &cfg) {
            Err(Error::ResourceLimit(msg)) => assert!(msg.contains("F_10007"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn matches_exhaustive_search() {
        let mut rng = SplitMix64::new(101);
        let mut done = 0;
        while done < 300 {
            let p = [2u64, 3, 5, 7][rng.below(4) as usize];
            let n = 1 + rng.below(3) as usize;
            let f = PrimeField::new(p).unwrap();
            let rows: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| rng.below(p)).collect()).collect();
            let a = MatrixFp::from_rows(f, &rows).unwrap();
            if a.inv().is_err() {
                continue;
            }
            let ord = matrix_order(&a).unwrap().value().to_u64().unwrap();
            let m = rng.below(ord);
            let b = a.pow_u64(m);
            let solver = [Solver::Exhaustive, Solver::Bsgs, Solver::PohligHellman][done % 3];
            let r = gl_dlp(&GlDlpInstance::new(a.clone(), b.clone()).unwrap(), &SolverConfig::new(solver)).unwrap();
            let brute: Vec<u64> = (0..ord).filter(|&e| a.pow_u64(e) == b).collect();
            assert_eq!(brute, vec![m]);
            assert_eq!(r.recovered, Residue::from_u64(m, ord).unwrap(), "{a}");
            done += 1;
        }
    }

    fn diag_key(g: GroupParams, d: &[u64]) -> Automorphism {
        Automorphism::from_private(g, MatrixFp::diagonal(g.field(), d), false).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let g = GroupParams::new(3, 5).unwrap();
        let (pk, _) = keypair_from(&diag_key(g, &[1, 2, 4]), big(3)).unwrap();
        let inst = reduce_mor_to_gl(&pk).unwrap();
        assert_eq!(inst.a(), &mat(5, &[&[3, 0], &[0, 3]]));
        assert_eq!(inst.b(), &mat(5, &[&[2, 0], &[0, 2]]));
        let flip = Automorphism::from_private(g, MatrixFp::diagonal(g.field(), &[1, 1, 2]), true).unwrap();
        let (pk, _) = keypair_from(&flip, big(2)).unwrap();
        assert_eq!(reduce_mor_to_gl(&pk).unwrap().a(), &mat(5, &[&[0, 4], &[2, 0]]));
    }

    #[test]
    fn identity_key_is_degenerate() {
        let g = GroupParams::new(3, 5).unwrap();
        let id = Automorphism::identity(g);
        let pk = PublicKey::new(id.clone(), id).unwrap();
        let report = break_mor(&pk, &[], &SolverConfig::default()).unwrap();
        assert!(report.degenerate);
        assert_eq!(report.recovered(), &Residue::default());
        assert!(report.full_order_match);
    }

    #[test]
    fn diagonal_keys_break_completely() {
        let g = GroupParams::new(3, 5).unwrap();
        let mut rng = SplitMix64::new(7);
        for seed in 0..10 {
            let (pk, sk, _) = keygen(g, KeyFamily::Diagonal, &mut SplitMix64::new(seed)).unwrap();
            let msgs: Vec<UtElement> = (0..10).map(|_| UtElement::random(g, &mut rng)).collect();
            let cts: Vec<Ciphertext> = msgs.iter().map(|a| encrypt(&pk, a, &mut rng).unwrap()).collect();
            let report = break_mor(&pk, &cts, &SolverConfig::default()).unwrap();
            assert!(report.full_order_match);
            assert!(report.recovered().contains(sk.m()));
            assert_eq!(report.plaintexts, msgs);
        }
    }

    #[test]
    fn m_equal_one() {
        let g = GroupParams::new(4, 7).unwrap();
        let mut rng = SplitMix64::new(3);
        let (_, _, phi) = keygen(g, KeyFamily::Mixed, &mut rng).unwrap();
        let (pk, _) = keypair_from(&phi, BigUint::one()).unwrap();
        let a = UtElement::random(g, &mut rng);
        let ct = encrypt(&pk, &a, &mut rng).unwrap();
        let report = break_mor(&pk, &[ct], &SolverConfig::default()).unwrap();
        assert!(report.recovered().contains(&BigUint::one()));
        assert_eq!(report.plaintexts, vec![a]);
    }

    #[test]
    fn mixed_keys_leak_the_quotient() {
        let mut rng = SplitMix64::new(11);
        for (n, p) in [(3, 10007), (4, 10007), (5, 101)] {
            let g = GroupParams::new(n, p).unwrap();
            for _ in 0..3 {
                let (pk, sk, _) = keygen(g, KeyFamily::Mixed, &mut rng).unwrap();
                let msgs: Vec<UtElement> = (0..3).map(|_| UtElement::random(g, &mut rng)).collect();
                let cts: Vec<Ciphertext> = msgs.iter().map(|a| encrypt(&pk, a, &mut rng).unwrap()).collect();
                let report = break_mor(&pk, &cts, &SolverConfig::default()).unwrap();
                assert!(report.recovered().contains(sk.m()));
                let inst = reduce_mor_to_gl(&pk).unwrap();
                assert_eq!(inst.a().pow(report.recovered().r()), *inst.b());
                assert_eq!(
                    pk.phi().compose_power(report.recovered().r()).induced_map(),
                    pk.phi_m().induced_map()
                );
                for (k, a) in msgs.iter().enumerate() {
                    assert_eq!(report.quotient_leaks[k], frattini_project(a));
                    assert_eq!(frattini_project(&report.plaintexts[k]), frattini_project(a));
                    if report.full_order_match {
                        assert_eq!(&report.plaintexts[k], a);
                    }
                }
                let v = report.to_value(&pk, &SolverConfig::default());
                assert_eq!(v["modulus"], report.modulus().to_string());
            }
        }
    }
}
