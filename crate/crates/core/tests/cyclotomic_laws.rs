mod common;

use std::collections::BTreeMap;

use common::{q, rng};
use fracpow::arith::{angle, divisors, euler_phi};
use fracpow::cyclotomic::{
    apply_mform, cyclotomic_poly, expand_phi_power, nprime_split, onemxn_factor, phi_as_onemx,
    substitute_cyclo, Basis, CycloProduct,
};
use fracpow::{IntPolynomial, MSpec, Rational};
use rand::Rng;

#[test]
fn degree_law() {
    for a in 1..=50u64 {
        for d in 1..=50u64 {
            let lo = d * angle(a, d);
            let total: u64 = divisors(a * d)
                .unwrap()
                .into_iter()
                .filter(|f| f % lo == 0)
                .map(|f| euler_phi(f).unwrap())
                .sum();
            assert_eq!(total, a * euler_phi(d).unwrap());
            let e = expand_phi_power(d, a).unwrap();
            let via_op: u64 = e.exps().keys().map(|&f| euler_phi(f).unwrap()).sum();
            assert_eq!(via_op, total);
        }
    }
}

#[test]
fn phi_substitution_reassembles() {
    for a in 1..=30u64 {
        for d in 1..=30u64 {
            let lhs = cyclotomic_poly(d).unwrap().substitute_power(a as usize);
            let rhs = expand_phi_power(d, a).unwrap().to_polynomial().unwrap();
            assert_eq!(lhs, rhs, "d = {d}, a = {a}");
        }
    }
}

#[test]
fn cyclotomic_basics() {
    for n in 1..=200 {
        let p = cyclotomic_poly(n).unwrap();
        assert!(p.constant_term().is_one());
        assert_eq!(p.content().unwrap(), q(1, 1));
        assert_eq!(p.degree(), Some(euler_phi(n).unwrap() as usize));
    }
    for n in 1..=60 {
        let p = onemxn_factor(n).unwrap().to_polynomial().unwrap();
        assert_eq!(p, IntPolynomial::one_minus_xn(n as usize));
    }
    for n in 1..=30 {
        let s = phi_as_onemx(n).unwrap().to_series(&q(40, 1)).unwrap();
        assert_eq!(s, cyclotomic_poly(n).unwrap().to_series(&q(40, 1)).unwrap());
    }
}

fn random_poly(r: &mut rand_chacha::ChaCha8Rng) -> IntPolynomial {
    let deg = r.gen_range(0..=5);
    let mut c: Vec<Rational> = (0..=deg)
        .map(|_| q(r.gen_range(-9..=9), r.gen_range(1..=12)))
        .collect();
    if c[deg].is_zero() {
        c[deg] = q(1, r.gen_range(1..=5));
    }
    IntPolynomial::new(c)
}

#[test]
fn gauss_content() {
    let mut r = rng(31);
    for _ in 0..200 {
        let (p, s) = (random_poly(&mut r), random_poly(&mut r));
        if p.is_zero() || s.is_zero() {
            continue;
        }
        assert_eq!(
            p.mul(&s).content().unwrap(),
            p.content().unwrap() * s.content().unwrap()
        );
        let prim = p.primitive_part().unwrap();
        assert!(prim.is_integral());
        assert_eq!(prim.scale(&p.content().unwrap()), p);
    }
}

fn random_phi(r: &mut rand_chacha::ChaCha8Rng) -> CycloProduct {
    let exps: BTreeMap<u64, Rational> = common::random_exponents(r, 12, 2);
    CycloProduct::new(Basis::Phi, exps).unwrap()
}

#[test]
fn substitution_agrees_with_series() {
    let mut r = rng(32);
    let cutoff = q(40, 1);
    for _ in 0..40 {
        let g = random_phi(&mut r);
        let a = r.gen_range(1..=6u64);
        let direct = substitute_cyclo(&g, a).unwrap().to_series(&cutoff).unwrap();
        let via = g
            .to_series(&(&cutoff / Rational::from(a)))
            .unwrap()
            .substitute_power(&Rational::from(a))
            .unwrap();
        assert_eq!(direct, via, "g = {g}, a = {a}");
    }
    let g = random_phi(&mut r);
    assert_eq!(substitute_cyclo(&g, 1).unwrap(), g);
}

#[test]
fn mform_agrees_with_series() {
    let cutoff = q(30, 1);
    let mut r = rng(33);
    for i in 0..15 {
        let g = if i == 0 {
            CycloProduct::new(Basis::Phi, BTreeMap::from([(1, q(1, 1))])).unwrap()
        } else {
            random_phi(&mut r)
        };
        let m: MSpec = ["2:1,3:1", "2:2,5:1", "3:1,4:1,6:2"][i % 3]
            .parse()
            .unwrap();
        let got = apply_mform(&g, &m).unwrap().to_series(&cutoff).unwrap();
        let mut want = fracpow::FracSeries::one(cutoff.clone()).unwrap();
        for &(b, e) in m.pairs() {
            let part = g
                .to_series(&(&cutoff / Rational::from(b)))
                .unwrap()
                .substitute_power(&Rational::from(b))
                .unwrap()
                .pow_u(e)
                .unwrap();
            want = want.mul(&part).unwrap();
        }
        assert_eq!(got, want, "g = {g}, M = {m}");
    }
    let m: MSpec = "2:1,3:1".parse().unwrap();
    assert!(apply_mform(&CycloProduct::one(Basis::Phi), &m)
        .unwrap()
        .is_one());
}

#[test]
fn nprime_split_reassembles() {
    let m: MSpec = "2:1,3:1".parse().unwrap();
    let mut r = rng(34);
    for _ in 0..40 {
        // Random products of cyclotomic factors and a random cofactor with P(0) = 1.
        let mut p = IntPolynomial::one();
        for _ in 0..r.gen_range(0..=3) {
            p = p.mul(&cyclotomic_poly(r.gen_range(2..=12)).unwrap());
        }
        let extra = IntPolynomial::from_ints(&[1, r.gen_range(-2..=2), r.gen_range(-2..=2)]);
        p = p.mul(&extra);
        if p.eval(&q(1, 1)).is_zero() {
            continue;
        }
        let split = nprime_split(&p, &m, false).unwrap();
        let back = split.part.to_polynomial().unwrap().mul(&split.residual);
        assert_eq!(back, p);
        for d in 1..=60u64 {
            if fracpow::arith::in_nprime(d, &m) {
                let g = split.residual.gcd(&cyclotomic_poly(d).unwrap());
                assert_eq!(
                    g.degree(),
                    Some(0),
                    "Phi_{d} still divides the residual of {p}"
                );
            }
        }
        for &d in split.part.exps().keys() {
            assert!(fracpow::arith::in_nprime(d, &m));
        }
    }
}
