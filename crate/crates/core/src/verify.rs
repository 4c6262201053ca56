//! Invariant suite run by `isogroup verify`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dual::enumerate_dual;
use crate::error::Result;
use crate::fourier::{inner_product, inverse_transform, transform, PeriodicFunction};
use crate::group::{box_points, GroupSpec, NormalForm};
use crate::quotient::QuotientGroup;
use crate::rational::gcd;
use crate::repr::{character_inner, irreps};
use crate::splitting::{cocycle, reverify, split_quotient, CheckResult};

/// Largest quotient the suite is willing to materialize.
const SUITE_ORDER_LIMIT: usize = 1500;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub group: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.pass)
    }
}

struct Suite {
    checks: Vec<CheckResult>,
}

impl Suite {
    fn push(&mut self, name: &str, pass: bool, witness: Option<String>) {
        self.checks.push(CheckResult { name: name.to_string(), pass, witness });
    }

    fn run<F: FnOnce() -> Result<(bool, Option<String>)>>(&mut self, name: &str, f: F) {
        match f() {
            Ok((pass, w)) => self.push(name, pass, w),
            Err(e) => self.push(name, false, Some(e.to_string())),
        }
    }
}

pub fn verify_spec(spec: &GroupSpec, seed: u64) -> VerifyReport {
    let mut s = Suite { checks: Vec::new() };
    let violations = spec.validate();
    if let Some(v) = violations.first() {
        s.push(&format!("spec: {}", v.axiom), false, Some(v.detail.clone()));
        return finish(spec, seed, s);
    }
    s.push("spec", true, None);

    let report = match spec.find_m0() {
        Ok(r) => r,
        Err(e) => {
            s.push("m0", false, Some(e.to_string()));
            return finish(spec, seed, s);
        }
    };
    let m0 = report.m0;
    s.push("m0 divides bound", report.m0_bound % m0 == 0, Some(format!("m0 = {m0}, bound = {}", report.m0_bound)));
    s.push(
        "multiples of m0 are good",
        (1..=3).all(|k| spec.is_power_normal(k * m0)),
        None,
    );
    s.push(
        "no proper divisor of m0 is good",
        crate::rational::divisors(m0).iter().filter(|&&d| d < m0).all(|&d| !spec.is_power_normal(d)),
        None,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let levels: Vec<u64> = [m0, 2 * m0]
        .into_iter()
        .filter(|&n| QuotientGroup::expected_order(spec, n) <= SUITE_ORDER_LIMIT)
        .collect();
    for &n in &levels {
        s.run(&format!("order formula N={n}"), || {
            let want = QuotientGroup::expected_order(spec, n);
            let got = QuotientGroup::count_by_generator_closure(spec, n)?;
            Ok((got == want, Some(format!("{got} (expected {want})"))))
        });
        s.run(&format!("reduction mod N={n}"), || reduction_sound(spec, n));
        s.run(&format!("section injective N={n}"), || {
            let mut seen = std::collections::HashSet::new();
            for p in box_points(spec.d2, n) {
                seen.insert(spec.normal_form(&spec.power_section(&p))?);
            }
            Ok((seen.len() == (n as usize).pow(spec.d2 as u32), None))
        });
    }

    let Some(&n) = levels.first() else {
        s.push("quotient size", false, Some(format!("G_{m0} exceeds {SUITE_ORDER_LIMIT} elements")));
        return finish(spec, seed, s);
    };
    let q = match QuotientGroup::build_with_m0(spec, n, m0) {
        Ok(q) => q,
        Err(e) => {
            s.push("quotient", false, Some(e.to_string()));
            return finish(spec, seed, s);
        }
    };
    s.push("group axioms", q.group.spot_check_axioms(&mut rng, 500), None);
    s.run("isometry associativity", || {
        let gens = spec.generators();
        let mut worst = 0.0f64;
        for _ in 0..200 {
            let pick = |rng: &mut ChaCha8Rng| gens[rng.gen_range(0..gens.len())].clone();
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let l = a.compose(&b)?.compose(&c)?;
            let r = a.compose(&b.compose(&c)?)?;
            if l.p != r.p || l.tau != r.tau {
                return Ok((false, Some("exact block differs".into())));
            }
            worst = worst.max(l.q.max_diff(&r.q));
        }
        Ok((worst <= 10.0 * spec.tol, Some(format!("{worst:e}"))))
    });

    s.run("irreps", || {
        let irr = irreps(&q.group, seed)?;
        let sum = irr.sum_of_squares();
        let chars = irr.characters();
        let mut worst = 0.0f64;
        for (i, a) in chars.iter().enumerate() {
            for (j, b) in chars.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((character_inner(a, b) - Complex64::new(want, 0.0)).norm());
            }
        }
        let hom = irr.irreps.iter().map(|r| r.homomorphism_defect_sampled(&q.group, &mut rng, 200)).fold(0.0, f64::max);
        Ok((
            sum == q.order() && worst <= 1e-6 && hom <= 1e-8,
            Some(format!("sum d^2 = {sum}, orthogonality {worst:e}, homomorphism {hom:e}")),
        ))
    });

    s.run("dual atlas", || {
        let atlas = enumerate_dual(spec, n, seed)?;
        Ok((atlas.report.pass, Some(format!("{:?}", atlas.report.checks))))
    });

    s.run("plancherel and inversion", || {
        let irr = irreps(&q.group, seed)?;
        let mut worst: f64 = 0.0;
        for shape in [(1, 1), (2, 3)] {
            let u = PeriodicFunction::random(spec, n, shape, &mut rng);
            let v = PeriodicFunction::random(spec, n, shape, &mut rng);
            let (tu, tv) = (transform(&u, &q, &irr)?, transform(&v, &q, &irr)?);
            worst = worst.max((inner_product(&u, &v)? - tu.inner(&tv)).norm());
            worst = worst.max(inverse_transform(&tu, &q, &irr)?.max_diff(&u));
        }
        Ok((worst <= 1e-8, Some(format!("{worst:e}"))))
    });

    s.run("cocycle integrality", || cocycle(spec).map(|_| (true, None)));

    let r = spec.rot_order() as i64;
    let split_n = (2..).find(|&k| gcd(k, r) == 1 && gcd(k, m0 as i64) == 1).unwrap_or(1) as u64;
    if QuotientGroup::expected_order(spec, split_n * m0) <= SUITE_ORDER_LIMIT {
        s.run(&format!("split m={m0} n={split_n}"), || {
            let cert = split_quotient(spec, m0, split_n)?;
            let again = reverify(spec, &cert)?;
            let failed: Vec<&str> = cert.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            Ok((cert.pass && again, (!failed.is_empty()).then(|| failed.join(", "))))
        });
    }
    finish(spec, seed, s)
}

/// `t(n + N·e_j)` and `t(n)·t(e_j)^N` agree in `G_N`.
fn reduction_sound(spec: &GroupSpec, modulus: u64) -> Result<(bool, Option<String>)> {
    let reduce = |nf: NormalForm| NormalForm {
        n: nf.n.iter().map(|x| x.rem_euclid(modulus as i64)).collect(),
        ..nf
    };
    for n in box_points(spec.d2, modulus) {
        for j in 0..spec.d2 {
            let mut shifted = n.clone();
            shifted[j] += modulus as i64;
            let lhs = reduce(spec.normal_form(&spec.power_section(&shifted))?);
            let mut e = vec![0; spec.d2];
            e[j] = 1;
            let rhs_iso = spec.power_section(&n).mul(&spec.power_section(&e).pow(modulus as i64));
            let rhs = reduce(spec.normal_form(&rhs_iso)?);
            if lhs != rhs {
                return Ok((false, Some(format!("n = {n:?}, j = {j}"))));
            }
        }
    }
    Ok((true, None))
}

fn finish(spec: &GroupSpec, seed: u64, s: Suite) -> VerifyReport {
    let pass = s.checks.iter().all(|c| c.pass);
    VerifyReport { group: spec.name.clone(), seed, checks: s.checks, pass }
}
