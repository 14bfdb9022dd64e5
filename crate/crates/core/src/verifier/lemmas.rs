//! Randomized property checks of the character-sum lemmas.
//!
//! Each check draws its cases from its own seeded stream and stops at the
//! first failure, reporting the offending object. The vanishing test is a
//! parameter so the harness itself can be exercised with a broken oracle.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::sampling::batch_rng;
use crate::error::Error;
use crate::group::{Element, Group, GroupSpec, Multiset, SubsetMask};
use crate::spectral::{subgroup_complement_spectrum, verify_spectral_pair};
use crate::sums::{
    char_coeff_matrix, equidistributed, lam_leung, numeric_char_sum, project, vanishes,
    CoefficientMatrix, CosetDecomposition,
};
use crate::tiling::{fourier_product_holds, subgroup_complement, verify_tiling};

/// Exact vanishing test `chi(M) = 0`.
pub type VanishingOracle<'a> = dyn Fn(&GroupSpec, Element, &Multiset) -> bool + 'a;

const NUMERIC_ZERO: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaCheck {
    pub name: &'static str,
    /// Cases run, including the failing one.
    pub cases: u64,
    /// Cases where the hypothesis of the lemma held.
    pub applicable: u64,
    pub failure: Option<String>,
}

impl LemmaCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub group: GroupSpec,
    pub seed: u64,
    pub trials: u64,
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(LemmaCheck::passed)
    }

    pub fn check(&self, name: &str) -> Option<&LemmaCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "group: {} seed: {} trials: {}",
            self.group, self.seed, self.trials
        );
        for c in &self.checks {
            let status = if c.passed() { "pass" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{status} {:<28} cases {:>6} applicable {:>6}",
                c.name, c.cases, c.applicable
            );
            if let Some(f) = &c.failure {
                let _ = writeln!(out, "     counterexample: {f}");
            }
        }
        let _ = writeln!(
            out,
            "result: {}",
            if self.passed() {
                "all lemmas pass"
            } else {
                "failures found"
            }
        );
        out
    }
}

/// Outcome of one case.
enum Case {
    /// The lemma's hypothesis did not hold.
    Skipped,
    Held,
    Failed(String),
}

fn run_check(
    name: &'static str,
    seed: u64,
    stream: u64,
    trials: u64,
    mut case: impl FnMut(&mut ChaCha8Rng, u64) -> Case,
) -> LemmaCheck {
    let mut rng = batch_rng(seed, stream);
    let mut check = LemmaCheck {
        name,
        cases: 0,
        applicable: 0,
        failure: None,
    };
    for i in 0..trials {
        check.cases += 1;
        match case(&mut rng, i) {
            Case::Skipped => {}
            Case::Held => check.applicable += 1,
            Case::Failed(msg) => {
                check.applicable += 1;
                check.failure = Some(msg);
                break;
            }
        }
    }
    check
}

fn show_multiset(spec: &GroupSpec, m: &Multiset) -> String {
    let parts: Vec<String> = m
        .entries()
        .map(|(i, c)| format!("{}x{}", spec.element(i), c))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

fn show_set(spec: &GroupSpec, s: &SubsetMask) -> String {
    let parts: Vec<String> = s.iter().map(|i| spec.element(i).to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

struct Gen<'a> {
    spec: &'a GroupSpec,
}

impl Gen<'_> {
    fn nonzero_u(&self, rng: &mut ChaCha8Rng) -> [u32; 2] {
        let p = self.spec.p() as u32;
        let a = rng.gen_range(1..p * p);
        [a / p, a % p]
    }

    fn nonzero_v(&self, rng: &mut ChaCha8Rng) -> u32 {
        rng.gen_range(1..self.spec.q() as u32)
    }

    fn noise(&self, rng: &mut ChaCha8Rng) -> Multiset {
        let n = self.spec.order();
        let mut m = Multiset::zero(n);
        for _ in 0..rng.gen_range(1..=2 * n) {
            m.add(rng.gen_range(0..n), 1);
        }
        m
    }

    /// Equal mass on every class `{<u, a> = k}`.
    fn equidistributed_p(&self, rng: &mut ChaCha8Rng, a: [u32; 2]) -> Multiset {
        let spec = self.spec;
        let mut classes = vec![Vec::new(); spec.p()];
        for g in spec.elements() {
            classes[spec.inner_p(g.u(), a) as usize].push(spec.index(g));
        }
        let t = rng.gen_range(1..=4);
        let mut m = Multiset::zero(spec.order());
        for class in &classes {
            for _ in 0..t {
                m.add(*class.choose(rng).expect("nonempty class"), 1);
            }
        }
        m
    }

    /// Equal mass on every `q`-level.
    fn equidistributed_q(&self, rng: &mut ChaCha8Rng) -> Multiset {
        let spec = self.spec;
        let t = rng.gen_range(1..=4);
        let p = spec.p() as u32;
        let mut m = Multiset::zero(spec.order());
        for v in 0..spec.q() as u32 {
            for _ in 0..t {
                let u = rng.gen_range(0..p * p);
                m.add(spec.index(Element::new(u / p, u % p, v)), 1);
            }
        }
        m
    }

    /// A multiset whose exponent table under the order-`pq` character `chi`
    /// is a random `y[j] + x[k]`.
    fn vanishing_pq(&self, rng: &mut ChaCha8Rng, chi: Element) -> Multiset {
        let spec = self.spec;
        let (p, q) = (spec.p(), spec.q());
        let mut cells = vec![Vec::new(); p * q];
        for g in spec.elements() {
            let (j, k) = spec.char_exponents(chi, g);
            cells[j as usize * q + k as usize].push(spec.index(g));
        }
        let x: Vec<u64> = (0..q).map(|_| rng.gen_range(0..3)).collect();
        let mut y: Vec<u64> = (0..p).map(|_| rng.gen_range(0..3)).collect();
        if x.iter().chain(y.iter()).all(|&v| v == 0) {
            y[0] = 1;
        }
        let mut m = Multiset::zero(spec.order());
        for j in 0..p {
            for k in 0..q {
                for _ in 0..y[j] + x[k] {
                    m.add(*cells[j * q + k].choose(rng).expect("nonempty cell"), 1);
                }
            }
        }
        m
    }

    fn random_transversal(
        &self,
        group: &Group,
        rng: &mut ChaCha8Rng,
        b: &SubsetMask,
    ) -> SubsetMask {
        let n = group.order();
        let mut seen = SubsetMask::empty(n);
        let mut out = SubsetMask::empty(n);
        for g in 0..n {
            if seen.contains(g) {
                continue;
            }
            let coset = group.translate(b, g);
            seen = seen.union(&coset);
            let members = coset.to_vec();
            out.insert(*members.choose(rng).expect("nonempty coset"));
        }
        out
    }
}

pub fn lemma_suite(group: &Group, seed: u64, trials: u64) -> LemmaReport {
    lemma_suite_with(group, seed, trials, &vanishes)
}

/// Runs every check with `oracle` standing in for the exact vanishing test.
pub fn lemma_suite_with(
    group: &Group,
    seed: u64,
    trials: u64,
    oracle: &VanishingOracle<'_>,
) -> LemmaReport {
    let spec = group.spec();
    let gen = Gen { spec };
    let (p, q) = (spec.p(), spec.q());
    let mut checks = Vec::new();
    if trials == 0 {
        return LemmaReport {
            group: *spec,
            seed,
            trials,
            checks,
        };
    }

    checks.push(run_check(
        "exact-numeric agreement",
        seed,
        1,
        trials,
        |rng, i| {
            let chi = spec.element(rng.gen_range(0..spec.order()));
            let m = match (i % 3, spec.order_of(chi)) {
                (0, _) | (_, 1) => gen.noise(rng),
                (_, o) => {
                    let mut m = if o == p {
                        gen.equidistributed_p(rng, chi.u())
                    } else if o == q {
                        gen.equidistributed_q(rng)
                    } else {
                        gen.vanishing_pq(rng, chi)
                    };
                    if i % 3 == 2 {
                        m.add(rng.gen_range(0..spec.order()), 1);
                    }
                    m
                }
            };
            let exact = oracle(spec, chi, &m);
            let mag = numeric_char_sum(spec, chi, &m);
            if exact == (mag < NUMERIC_ZERO) {
                Case::Held
            } else {
                Case::Failed(format!(
                    "chi = {chi}, M = {}, exact vanishing {exact}, |chi(M)| = {mag:e}",
                    show_multiset(spec, &m)
                ))
            }
        },
    ));

    checks.push(run_check(
        "order-p divisibility",
        seed,
        2,
        trials,
        |rng, i| {
            let a = gen.nonzero_u(rng);
            let chi = Element::new(a[0], a[1], 0);
            let m = if i % 2 == 0 {
                gen.equidistributed_p(rng, a)
            } else {
                gen.noise(rng)
            };
            if !oracle(spec, chi, &m) {
                Case::Skipped
            } else if m.total() % p as u64 == 0 {
                Case::Held
            } else {
                Case::Failed(format!(
                    "chi = {chi} vanishes on M = {} but p = {p} does not divide |M| = {}",
                    show_multiset(spec, &m),
                    m.total()
                ))
            }
        },
    ));

    checks.push(run_check(
        "order-q divisibility",
        seed,
        3,
        trials,
        |rng, i| {
            let chi = Element::new(0, 0, gen.nonzero_v(rng));
            let m = if i % 2 == 0 {
                gen.equidistributed_q(rng)
            } else {
                gen.noise(rng)
            };
            if !oracle(spec, chi, &m) {
                Case::Skipped
            } else if m.total() % q as u64 == 0 {
                Case::Held
            } else {
                Case::Failed(format!(
                    "chi = {chi} vanishes on M = {} but q = {q} does not divide |M| = {}",
                    show_multiset(spec, &m),
                    m.total()
                ))
            }
        },
    ));

    checks.push(run_check("equidistribution", seed, 4, trials, |rng, i| {
        let a = gen.nonzero_u(rng);
        let m = if i % 2 == 0 {
            gen.equidistributed_p(rng, a)
        } else {
            gen.noise(rng)
        };
        let direct = equidistributed(spec, &m, a);
        if direct == oracle(spec, Element::new(a[0], a[1], 0), &m) {
            Case::Held
        } else {
            Case::Failed(format!(
                "a = ({},{}), M = {}, equidistributed {direct}",
                a[0],
                a[1],
                show_multiset(spec, &m)
            ))
        }
    }));

    checks.push(run_check("constant multiset", seed, 5, trials, |rng, i| {
        let n = spec.order();
        let m = if i % 2 == 0 {
            Multiset::from_counts(vec![rng.gen_range(1..=3); n])
        } else {
            let mut m = gen.noise(rng);
            if m.is_constant() {
                m.add(0, 1);
            }
            m
        };
        let all_vanish = (1..n).all(|chi| oracle(spec, spec.element(chi), &m));
        if all_vanish == m.is_constant() {
            Case::Held
        } else {
            Case::Failed(format!(
                "M = {}, constant {}, all nontrivial sums vanish {all_vanish}",
                show_multiset(spec, &m),
                m.is_constant()
            ))
        }
    }));

    checks.push(run_check(
        "coset decomposition",
        seed,
        6,
        trials,
        |rng, i| {
            let x: Vec<u64> = (0..q).map(|_| rng.gen_range(0..6)).collect();
            let y: Vec<u64> = (0..p).map(|_| rng.gen_range(0..6)).collect();
            let c = CosetDecomposition { x, y }.reconstruct();
            match i % 3 {
                0 => match lam_leung(&c) {
                    Ok(d)
                        if d.reconstruct() == c
                            && d.y.iter().min() == Some(&0)
                            && p as i64 * d.p_cosets() as i64 + q as i64 * d.q_cosets() as i64
                                == c.total() =>
                    {
                        Case::Held
                    }
                    other => Case::Failed(format!("matrix {c:?} decomposed as {other:?}")),
                },
                1 => {
                    let mut bad = c.clone();
                    let (j, k) = (rng.gen_range(0..p), rng.gen_range(0..q));
                    bad.set(j, k, bad.get(j, k) + 1);
                    let mag = numeric_matrix_sum(&bad);
                    match lam_leung(&bad) {
                        Err(Error::NotVanishing { .. }) if mag > NUMERIC_ZERO => Case::Held,
                        other => Case::Failed(format!(
                            "perturbed matrix {bad:?} (|sum| = {mag:e}) gave {other:?}"
                        )),
                    }
                }
                _ => {
                    let a = gen.nonzero_u(rng);
                    let b = gen.nonzero_v(rng);
                    let chi = Element::new(a[0], a[1], b);
                    let m = gen.vanishing_pq(rng, chi);
                    if !oracle(spec, chi, &m) {
                        return Case::Failed(format!(
                            "coset-built M = {} does not vanish at {chi}",
                            show_multiset(spec, &m)
                        ));
                    }
                    let proj = project(spec, &m, a, b).expect("nonzero direction");
                    match lam_leung(&proj) {
                        Ok(d) if p as u64 * d.p_cosets() + q as u64 * d.q_cosets() == m.total() => {
                            Case::Held
                        }
                        other => Case::Failed(format!(
                            "projection {proj:?} of M = {} gave {other:?}",
                            show_multiset(spec, &m)
                        )),
                    }
                }
            }
        },
    ));

    checks.push(run_check(
        "projection consistency",
        seed,
        7,
        trials,
        |rng, _| {
            let a = gen.nonzero_u(rng);
            let b = gen.nonzero_v(rng);
            let m = gen.noise(rng);
            let proj = project(spec, &m, a, b).expect("nonzero direction");
            let direct = char_coeff_matrix(spec, Element::new(a[0], a[1], b), &m);
            if proj.relabel_columns(b as usize) == direct {
                Case::Held
            } else {
                Case::Failed(format!(
                    "a = ({},{}), b = {b}, M = {}: {proj:?} vs {direct:?}",
                    a[0],
                    a[1],
                    show_multiset(spec, &m)
                ))
            }
        },
    ));

    let subgroups = group.subgroups();

    checks.push(run_check(
        "subgroup complement spectrum",
        seed,
        8,
        trials,
        |rng, _| {
            let b = subgroups.choose(rng).expect("subgroups");
            let a = gen.random_transversal(group, rng, b);
            match subgroup_complement_spectrum(group, &a, b) {
                Ok(cert)
                    if verify_spectral_pair(group, &a, &cert.spectrum)
                        && verify_spectral_pair(group, &cert.spectrum, &a) =>
                {
                    Case::Held
                }
                other => Case::Failed(format!(
                    "A = {}, B = {}: {other:?}",
                    show_set(spec, &a),
                    show_set(spec, b)
                )),
            }
        },
    ));

    checks.push(run_check("divisor coverage", seed, 9, 1, |_, _| {
        let n = spec.order();
        for d in (1..=n).filter(|d| n % d == 0) {
            let Some(h) = subgroups.iter().find(|h| h.len() == d) else {
                return Case::Failed(format!("no subgroup of order {d}"));
            };
            match subgroup_complement(group, h) {
                Ok(l) if verify_tiling(group, h, &l) && group.is_subgroup(&l) => {}
                other => {
                    return Case::Failed(format!(
                        "subgroup {} of order {d}: complement {other:?}",
                        show_set(spec, h)
                    ))
                }
            }
        }
        Case::Held
    }));

    checks.push(run_check("fourier product", seed, 10, trials, |rng, _| {
        let b = subgroups.choose(rng).expect("subgroups");
        let a = gen.random_transversal(group, rng, b);
        let t = rng.gen_range(0..spec.order());
        let a = group.translate(&a, t);
        if !verify_tiling(group, &a, b) {
            return Case::Failed(format!("transversal {} does not tile", show_set(spec, &a)));
        }
        if fourier_product_holds(group, &a, b) {
            Case::Held
        } else {
            Case::Failed(format!(
                "tiling {} + {} has a character vanishing on neither",
                show_set(spec, &a),
                show_set(spec, b)
            ))
        }
    }));

    LemmaReport {
        group: *spec,
        seed,
        trials,
        checks,
    }
}

fn numeric_matrix_sum(c: &CoefficientMatrix) -> f64 {
    let (p, q) = (c.rows() as f64, c.cols() as f64);
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for j in 0..c.rows() {
        for k in 0..c.cols() {
            let theta = std::f64::consts::TAU * (j as f64 / p + k as f64 / q);
            re += c.get(j, k) as f64 * theta.cos();
            im += c.get(j, k) as f64 * theta.sin();
        }
    }
    re.hypot(im)
}
