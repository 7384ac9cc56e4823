//! The `AGL(1,q)` trend and the numeric binomial-tail check.

use super::cache::coverage_table_cached;
use crate::chebotarev::{chebotarev_exact, to_f64};
use crate::error::{Error, Result};
use crate::group::{load_group, Family, GroupDescriptor};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::value::RawValue;

fn raw(x: &BigInt) -> Box<RawValue> {
    RawValue::from_string(x.to_string()).expect("integers are valid JSON")
}

#[derive(Clone, Debug, Serialize)]
pub struct AglRow {
    pub q: usize,
    pub order: usize,
    pub c_num: Box<RawValue>,
    pub c_den: Box<RawValue>,
    pub c: f64,
    pub c_over_q: f64,
    #[serde(skip)]
    pub exact: BigRational,
}

/// Exact `C(AGL(1,q))` and `C/q` for each `q`.
pub fn agl_trend(qs: &[usize]) -> Result<Vec<AglRow>> {
    qs.iter()
        .map(|&q| {
            let g = load_group(&GroupDescriptor::family(Family::Agl1, q))?;
            let c = chebotarev_exact(&coverage_table_cached(&g)?)?;
            let cf = to_f64(&c);
            Ok(AglRow {
                q,
                order: g.order(),
                c_num: raw(c.numer()),
                c_den: raw(c.denom()),
                c: cf,
                c_over_q: cf / q as f64,
                exact: c,
            })
        })
        .collect()
}

pub const AGL_QS: [usize; 9] = [2, 3, 4, 5, 7, 8, 9, 11, 13];

/// `alpha = 1 - 1/e`.
pub fn alpha() -> f64 {
    1.0 - (-1.0f64).exp()
}

/// `gamma_eps = (1 - ln(1 - eps)) / alpha`.
pub fn gamma(eps: f64) -> f64 {
    (1.0 - (1.0 - eps).ln()) / alpha()
}

/// `P(B(m, p) >= l)`, by exact summation of the complementary lower tail.
pub fn binomial_tail(m: u64, p: &BigRational, l: u64) -> BigRational {
    if l == 0 {
        return BigRational::one();
    }
    if l > m {
        return BigRational::zero();
    }
    let q = BigRational::one() - p;
    // term_i = C(m,i) p^i q^(m-i), built up by the ratio of consecutive terms
    let mut term = q.pow(m as i32);
    let mut lower = BigRational::zero();
    for i in 0..l {
        lower += &term;
        let ratio = BigRational::new(BigInt::from(m - i), BigInt::from(i + 1)) * p / &q;
        term *= ratio;
    }
    BigRational::one() - lower
}

#[derive(Clone, Debug, Serialize)]
pub struct BinomialCheckRow {
    pub epsilon: String,
    pub p: String,
    pub l: u64,
    pub gamma: f64,
    pub mm: u64,
    /// The tail as a float; the exact value decides `holds`.
    pub tail: f64,
    pub holds: bool,
    #[serde(skip)]
    pub tail_exact: BigRational,
}

/// Parses `a/b`, an integer or a decimal such as `0.05` into an exact
/// rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Descriptor(format!("not a rational: {s:?}"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    Ok(BigRational::new(digits, BigInt::from(10).pow(frac.len() as u32)))
}

pub fn binomial_row(eps: &BigRational, p: &BigRational, l: u64) -> Result<BinomialCheckRow> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if l == 0 {
        return Err(Error::Precondition("l must be at least 1".into()));
    }
    if !(p > &zero && p < &one) || p.is_negative() {
        return Err(Error::Precondition(format!("p = {p} is not in (0, 1)")));
    }
    if !(eps > &zero && eps < &one) {
        return Err(Error::Precondition(format!("epsilon = {eps} is not in (0, 1)")));
    }
    let g = gamma(to_f64(eps));
    let mm = (g * l as f64 / to_f64(p)).ceil() as u64;
    let tail = binomial_tail(mm, p, l);
    Ok(BinomialCheckRow {
        epsilon: eps.to_string(),
        p: p.to_string(),
        l,
        gamma: g,
        mm,
        tail: to_f64(&tail),
        holds: &tail >= eps,
        tail_exact: tail,
    })
}

pub fn binomial_check(
    epsilons: &[BigRational],
    ps: &[BigRational],
    ls: &[u64],
) -> Result<Vec<BinomialCheckRow>> {
    let mut out = Vec::new();
    for e in epsilons {
        for p in ps {
            for &l in ls {
                out.push(binomial_row(e, p, l)?);
            }
        }
    }
    Ok(out)
}

/// The default grid: `eps` in {1/2, 6/7}, `p` in {0.01, 0.05, 0.1, 0.25,
/// 0.5}, `l` in 1..=10.
pub fn default_binomial_grid() -> (Vec<BigRational>, Vec<BigRational>, Vec<u64>) {
    let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    (
        vec![r(1, 2), r(6, 7)],
        vec![r(1, 100), r(1, 20), r(1, 10), r(1, 4), r(1, 2)],
        (1..=10).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    /// Oracle: the upper tail summed directly, each term from the binomial
    /// coefficient.
    fn upper_tail(m: u64, p: &BigRational, l: u64) -> BigRational {
        let q = BigRational::one() - p;
        (l..=m)
            .map(|i| {
                let c: BigInt = num_integer::binomial(BigInt::from(m), BigInt::from(i));
                BigRational::from_integer(c) * p.pow(i as i32) * q.pow((m - i) as i32)
            })
            .fold(BigRational::zero(), |a, b| a + b)
    }

    #[test]
    fn tail_matches_direct_sum() {
        for m in 0..14 {
            for l in 0..=m + 1 {
                for p in [r(1, 2), r(1, 3), r(2, 7)] {
                    assert_eq!(binomial_tail(m, &p, l), upper_tail(m, &p, l), "{m} {l} {p}");
                }
            }
        }
    }

    #[test]
    fn examples() {
        let row = binomial_row(&r(1, 2), &r(1, 2), 1).unwrap();
        assert_eq!(row.mm, (2.0 * gamma(0.5)).ceil() as u64);
        assert!(row.holds);
        let row = binomial_row(&r(6, 7), &r(1, 20), 5).unwrap();
        assert!(row.holds && row.tail_exact >= r(6, 7));
        assert!(binomial_row(&r(1, 2), &r(1, 2), 0).is_err());
        assert!(binomial_row(&r(1, 2), &r(1, 1), 1).is_err());
        assert!(binomial_row(&r(0, 1), &r(1, 2), 1).is_err());
    }

    #[test]
    fn default_grid_holds() {
        let (e, p, l) = default_binomial_grid();
        let rows = binomial_check(&e, &p, &l).unwrap();
        assert_eq!(rows.len(), 100);
        assert!(rows.iter().all(|r| r.holds));
    }

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational("0.05").unwrap(), r(1, 20));
        assert_eq!(parse_rational("6/7").unwrap(), r(6, 7));
        assert_eq!(parse_rational("1").unwrap(), r(1, 1));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn agl_small() {
        let rows = agl_trend(&[2, 3]).unwrap();
        assert_eq!(rows[0].exact, r(2, 1));
        assert_eq!(rows[0].c_over_q, 1.0);
        assert_eq!(rows[1].exact, r(19, 5));
    }
}
