//! Exact counts of fixed and moved `t`-sets, and evaluation of the
//! probability bounds built from them.
//!
//! Counting is exact over big integers. Only the final bound values are
//! real numbers, evaluated with [`real::Real`].

pub mod real;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{minimal_degree, PermGroup};
use crate::perm::{is_prime, Permutation};
use real::Real;

/// Largest `n` accepted by [`union_bound_asymmetry`].
pub const UNION_BOUND_MAX_N: usize = 64;

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Fixed and moved `t`-subsets of one permutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MovedCountResult {
    pub n: usize,
    pub t: usize,
    #[serde(serialize_with = "as_string")]
    pub fixed: BigUint,
    #[serde(serialize_with = "as_string")]
    pub moved: BigUint,
}

fn as_string<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// A `t`-set is fixed exactly when it is a union of cycles, so the fixed
/// count is the coefficient of `x^t` in `∏ (1 + x^len)` over all cycles
/// (fixed points included).
pub fn fixed_tsets(sigma: &Permutation, t: usize) -> Result<MovedCountResult> {
    let n = sigma.degree();
    if t > n {
        return Err(Error::InvalidArgument(format!("t = {t} exceeds n = {n}")));
    }
    let mut coeffs = vec![BigUint::zero(); t + 1];
    coeffs[0] = BigUint::one();
    for &len in &sigma.cycle_structure().cycle_lengths {
        for d in (len..=t).rev() {
            let add = coeffs[d - len].clone();
            coeffs[d] += add;
        }
    }
    let fixed = coeffs.pop().unwrap();
    let moved = binomial(n, t) - &fixed;
    Ok(MovedCountResult { n, t, fixed, moved })
}

/// `ρ(s, ℓ, p)`: number of `ℓ`-subsets of the support that are unions of
/// `p`-cycles, for a permutation made of `s/p` disjoint `p`-cycles.
pub fn rho(s: usize, l: usize, p: usize) -> BigUint {
    if l.is_multiple_of(p) {
        binomial(s / p, l / p)
    } else {
        BigUint::zero()
    }
}

/// Moved `t`-sets of a permutation of prime order `p` with support `s` on
/// `n` points: `Σ_{ℓ=1..t} (C(s,ℓ) − ρ(s,ℓ,p)) · C(n−s, t−ℓ)`.
pub fn prime_moved_formula(n: usize, s: usize, p: usize, t: usize) -> Result<BigUint> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if !s.is_multiple_of(p) {
        return Err(Error::InvalidArgument(format!("p = {p} does not divide s = {s}")));
    }
    if s > n || t > n {
        return Err(Error::InvalidArgument(format!("need s, t <= n (n = {n}, s = {s}, t = {t})")));
    }
    let mut total = BigUint::zero();
    for l in 1..=t.min(s) {
        let inner = binomial(s, l) - rho(s, l, p);
        total += inner * binomial(n - s, t - l);
    }
    Ok(total)
}

/// Lower estimate `½ (C(n,t) − C(n−s,t))` for the moved count of any
/// permutation with support `s`, doubled to stay in integers.
pub fn moved_lower_estimate_doubled(n: usize, s: usize, t: usize) -> BigUint {
    binomial(n, t) - binomial(n - s, t)
}

/// Moved transversal `t`-sets of a layer-respecting permutation, layers
/// being `t` consecutive blocks of `r` vertices.
///
/// A transversal is fixed when, along every cycle `i_1 → .. → i_c` of the
/// induced layer permutation, its vertex in `i_1` is fixed by `σ^c`; the
/// vertices in the other layers of the cycle are then forced.
pub fn transversal_moved(sigma: &Permutation, t: usize, r: usize) -> Result<MovedCountResult> {
    let n = t * r;
    if sigma.degree() != n {
        return Err(Error::DegreeMismatch {
            left: n,
            right: sigma.degree(),
        });
    }
    let mut layer_map = vec![0usize; t];
    for (i, slot) in layer_map.iter_mut().enumerate() {
        let target = sigma.apply(i * r) / r;
        if (i * r..(i + 1) * r).any(|v| sigma.apply(v) / r != target) {
            return Err(Error::Validation(format!("permutation does not map layer {i} onto a layer")));
        }
        *slot = target;
    }
    let mut seen = vec![false; t];
    let mut fixed = BigUint::one();
    for start in 0..t {
        if seen[start] {
            continue;
        }
        let mut c = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = layer_map[i];
            c += 1;
        }
        let power = sigma.pow(c as u64);
        let count = (start * r..(start + 1) * r).filter(|&v| power.apply(v) == v).count();
        fixed *= BigUint::from(count);
    }
    let total = BigUint::from(r).pow(t as u32);
    let moved = &total - &fixed;
    Ok(MovedCountResult { n, t, fixed, moved })
}

/// Number of permutations of `n` points that are products of `j` disjoint
/// `p`-cycles: `n! / ((n − jp)! · p^j · j!)`.
pub fn prime_class_size(n: usize, j: usize, p: usize) -> BigUint {
    if j * p > n {
        return BigUint::zero();
    }
    factorial(n) / (factorial(n - j * p) * BigUint::from(p).pow(j as u32) * factorial(j))
}

/// A real-valued bound with its inputs.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub inputs: BTreeMap<String, Value>,
    /// Decimal value, 20 significant digits.
    pub value: String,
    pub log2: Option<f64>,
    /// Exact rational value, when the bound has one.
    pub exact: Option<String>,
    /// Set when a probability bound exceeds 1.
    pub vacuous: bool,
    pub precision: String,
    #[serde(skip)]
    real: Real,
}

impl BoundReport {
    fn new(name: &str, inputs: Value, real: Real, exact: Option<String>) -> Self {
        let inputs = match inputs {
            Value::Object(map) => map.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        BoundReport {
            name: name.to_string(),
            inputs,
            value: real::decimal(&real),
            log2: real::log2(&real),
            exact,
            vacuous: real > real::from_u64(1),
            precision: real::PRECISION_NOTE.to_string(),
            real,
        }
    }

    pub fn real(&self) -> &Real {
        &self.real
    }

    /// Nearest double; underflows to 0 for very small values.
    pub fn to_f64(&self) -> f64 {
        real::to_f64(&self.real)
    }
}

fn primes_up_to(n: usize) -> impl Iterator<Item = usize> {
    (2..=n).filter(|&p| is_prime(p))
}

/// `Σ_σ 2^{−N(σ)/2}` over all permutations `σ` of prime order on `n` points,
/// where `N(σ)` is the number of moved `t`-sets. The sum runs over the
/// classes (prime `p`, `j` disjoint `p`-cycles) with class sizes from
/// [`prime_class_size`].
pub fn union_bound_asymmetry(n: usize, t: usize) -> Result<BoundReport> {
    if n > UNION_BOUND_MAX_N {
        return Err(Error::DegreeCap {
            degree: n,
            cap: UNION_BOUND_MAX_N,
        });
    }
    if t == 0 || t > n {
        return Err(Error::InvalidArgument(format!("need 1 <= t <= n (n = {n}, t = {t})")));
    }
    let mut sum = real::from_u64(0);
    for p in primes_up_to(n) {
        for j in 1..=n / p {
            let moved = prime_moved_formula(n, j * p, p, t)?;
            let e = moved
                .to_u64()
                .ok_or_else(|| Error::cap("moved t-set count", u64::MAX))?;
            sum += real::from_big(&prime_class_size(n, j, p)) * real::pow2_neg_half(e);
        }
    }
    Ok(BoundReport::new(
        "union_bound_asymmetry",
        json!({ "n": n, "t": t }),
        sum,
        None,
    ))
}

/// Leading term `√2 · n² · 2^{−n/2}` of the probability that a random graph
/// on `n` vertices has a non-trivial automorphism.
pub fn asymptotic_p2(n: usize) -> Result<BoundReport> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("n must be at least 4 (got {n})")));
    }
    let v = real::sqrt2() * real::from_u64((n * n) as u64) * real::pow2_neg_half(n as u64);
    Ok(BoundReport::new("asymptotic_P2", json!({ "n": n }), v, None))
}

/// `n² · 2^{−n/4}`, the rate of the leading term for balanced bipartite
/// transversal hypergraphs; the constant factor is not known and omitted.
pub fn transversal_rate_q2(n: usize) -> Result<BoundReport> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("n must be even and at least 2 (got {n})")));
    }
    let v = real::from_u64((n * n) as u64) * real::pow2_neg_half((n / 2) as u64);
    Ok(BoundReport::new("rate_Q2", json!({ "n": n, "constant": "omitted" }), v, None))
}

/// Count of products `∏ (r − s_i)` over `layers` layers, each carrying an
/// independent permutation of order dividing `p` with support `s_i`,
/// grouped by the value of the product.
fn fixed_layer_products(layers: usize, r: usize, p: usize) -> HashMap<BigUint, BigUint> {
    let mut states: HashMap<BigUint, BigUint> = HashMap::new();
    states.insert(BigUint::one(), BigUint::one());
    for _ in 0..layers {
        let mut next: HashMap<BigUint, BigUint> = HashMap::new();
        for (prod, count) in &states {
            for j in 0..=r / p {
                let c = prime_class_size(r, j, p);
                let key = prod * BigUint::from(r - j * p);
                *next.entry(key).or_default() += count * c;
            }
        }
        states = next;
    }
    states
}

/// The union bound for balanced transversal hypergraphs with `t` layers of
/// size `r`: `Σ_σ 2^{−N(σ)/2}` over layer-respecting permutations `σ` of
/// prime order, `N(σ)` counting moved transversal `t`-sets.
///
/// For prime `p`, the induced layer permutation `π` satisfies `π^p = 1`.
/// When `π` has `c` cycles of length `p`, the maps along each such cycle
/// compose to the identity (`(r!)^{p−1}` choices per cycle), every remaining
/// layer carries a permutation of order dividing `p`, and
/// `N = r^t − r^c ∏ (r − s_i)` over the remaining layers.
pub fn transversal_union_bound(t: usize, r: usize) -> Result<BoundReport> {
    if t == 0 || r == 0 || t * r > UNION_BOUND_MAX_N {
        return Err(Error::InvalidArgument(format!(
            "need t, r >= 1 and t·r <= {UNION_BOUND_MAX_N} (t = {t}, r = {r})"
        )));
    }
    let total = BigUint::from(r).pow(t as u32);
    let mut sum = real::from_u64(0);
    for p in primes_up_to(r.max(t)) {
        for c in 0..=t / p {
            let layer_perms = prime_class_size(t, c, p);
            if layer_perms.is_zero() {
                continue;
            }
            let cycle_maps = factorial(r).pow((c * (p - 1)) as u32);
            let rc = BigUint::from(r).pow(c as u32);
            for (prod, count) in fixed_layer_products(t - c * p, r, p) {
                let fixed = &rc * &prod;
                if c == 0 && fixed == total {
                    continue; // the identity
                }
                let moved = (&total - &fixed)
                    .to_u64()
                    .ok_or_else(|| Error::cap("moved transversal count", u64::MAX))?;
                let mult = &layer_perms * &cycle_maps * count;
                sum += real::from_big(&mult) * real::pow2_neg_half(moved);
            }
        }
    }
    Ok(BoundReport::new(
        "transversal_union_bound",
        json!({ "t": t, "r": r, "n": t * r }),
        sum,
        None,
    ))
}

/// Both forms of the bound on `Prob(M_Y ≠ 1)` for a random `k`-set `Y`.
#[derive(Debug, Clone, Serialize)]
pub struct StabilizerBound {
    /// `2|M| · C(n − m/2, k) / C(n, k)`.
    pub binomial: BoundReport,
    /// `2|M| · (1 − m/(2n))^k`.
    pub exponential: BoundReport,
}

fn rational_report(name: &str, inputs: Value, num: BigUint, den: BigUint) -> BoundReport {
    let g = gcd(&num, &den);
    let (num, den) = if g.is_zero() { (num, den) } else { (&num / &g, &den / &g) };
    let exact = if den.is_one() {
        num.to_string()
    } else {
        format!("{num}/{den}")
    };
    BoundReport::new(name, inputs, real::ratio(&num, &den), Some(exact))
}

fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// `m/2` may be a half-integer; `C(n − m/2, k)` is the falling-factorial
/// binomial, taken as 0 once `m/2 > n − k`.
pub fn stabilizer_prob_bound(order_m: &BigUint, n: usize, m: usize, k: usize) -> Result<StabilizerBound> {
    if m > n || k > n || n == 0 {
        return Err(Error::InvalidArgument(format!("need m, k <= n and n >= 1 (n = {n}, m = {m}, k = {k})")));
    }
    let inputs = json!({ "order": order_m.to_string(), "n": n, "m": m, "k": k });
    let two_m = BigUint::from(2u32) * order_m;

    // ∏ (2n − m − 2i) / (2^k ∏ (n − i)); zero when m > 2(n − k)
    let (num, den) = if m > 2 * (n - k) {
        (BigUint::zero(), BigUint::one())
    } else {
        let mut num = two_m.clone();
        let mut den = BigUint::one();
        for i in 0..k {
            num *= BigUint::from(2 * n - m - 2 * i);
            den *= BigUint::from(2 * (n - i));
        }
        (num, den)
    };
    let binomial = rational_report("stabilizer_prob_bound_binomial", inputs.clone(), num, den);

    let num = two_m * BigUint::from(2 * n - m).pow(k as u32);
    let den = BigUint::from(2 * n).pow(k as u32);
    let exponential = rational_report("stabilizer_prob_bound_exponential", inputs, num, den);
    Ok(StabilizerBound { binomial, exponential })
}

/// `2 · C(n − ⌈m/2⌉, k)`, the integer ceiling on the number of `k`-sets a
/// non-identity element can fix in a group of minimal degree `m`.
pub fn fixed_kset_ceiling(n: usize, m: usize, k: usize) -> BigUint {
    BigUint::from(2u32) * binomial(n - m.div_ceil(2).min(n), k)
}

/// Whether `|G| ≥ 2^{n/m}` for a transitive group of minimal degree `m`.
pub fn order_vs_mindeg_check(group: &PermGroup, mindeg_cap: u64) -> Result<bool> {
    if !group.is_transitive() {
        return Err(Error::InvalidArgument("group is not transitive".into()));
    }
    if group.is_trivial() {
        return Ok(true);
    }
    let m = minimal_degree(group, mindeg_cap)
        .ok_or_else(|| Error::cap("minimal degree search", mindeg_cap))?
        .degree;
    // |G|^m ≥ 2^n
    Ok(group.order().pow(m as u32) >= BigUint::one() << group.degree())
}
