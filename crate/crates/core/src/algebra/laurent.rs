use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Laurent polynomial with exact integer coefficients in 0, 1 or 2 formal
/// variables. Exponents may be negative. Zero coefficients are never stored.
///
/// The exponent key is a fixed pair; for arity < 2 the unused slots are 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Laurent {
    vars: Vec<String>,
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl Laurent {
    /// Zero polynomial in the given variables (0, 1 or 2 of them).
    pub fn zero(vars: &[&str]) -> Self {
        assert!(vars.len() <= 2, "at most two variables");
        Laurent {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    /// Constant polynomial with no variables.
    pub fn constant(c: impl Into<BigInt>) -> Self {
        let mut p = Laurent::zero(&[]);
        p.add_term(&[], c.into());
        p
    }

    /// The constant 1 in the given variables.
    pub fn one(vars: &[&str]) -> Self {
        let mut p = Laurent::zero(vars);
        let exps = vec![0; vars.len()];
        p.add_term(&exps, BigInt::one());
        p
    }

    /// Single monomial c * v0^e0 [* v1^e1].
    pub fn monomial(vars: &[&str], exps: &[i64], c: impl Into<BigInt>) -> Self {
        let mut p = Laurent::zero(vars);
        p.add_term(exps, c.into());
        p
    }

    /// Build from a list of (exponents, coefficient) terms; repeated exponents accumulate.
    pub fn from_terms<I, C>(vars: &[&str], terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<i64>, C)>,
        C: Into<BigInt>,
    {
        let mut p = Laurent::zero(vars);
        for (e, c) in terms {
            p.add_term(&e, c.into());
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> Vec<&str> {
        self.vars.iter().map(|s| s.as_str()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn key(&self, exps: &[i64]) -> (i64, i64) {
        assert_eq!(exps.len(), self.vars.len(), "exponent arity mismatch");
        match exps.len() {
            0 => (0, 0),
            1 => (exps[0], 0),
            _ => (exps[0], exps[1]),
        }
    }

    /// Add c * v^exps into the polynomial, dropping the term if it cancels.
    pub fn add_term(&mut self, exps: &[i64], c: impl Into<BigInt>) {
        let c = c.into();
        if c.is_zero() {
            return;
        }
        let k = self.key(exps);
        let entry = self.terms.entry(k).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn coeff(&self, exps: &[i64]) -> BigInt {
        let k = self.key(exps);
        self.terms.get(&k).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Iterate terms in ascending exponent order. Exponent tuples are padded to length 2.
    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), &BigInt)> + '_ {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Sum of absolute values of all coefficients (total rank when used as a Poincare polynomial).
    pub fn coeff_abs_sum(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Sum of all coefficients (evaluation at all variables = 1).
    pub fn eval_all_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "variable mismatch");
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -v.clone();
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Laurent::zero(&self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>());
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    /// Multiply by the monomial v0^e0 [* v1^e1].
    pub fn shift(&self, exps: &[i64]) -> Self {
        let (d0, d1) = self.key(exps);
        let mut out = Laurent::zero(&self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>());
        for (&(e0, e1), c) in &self.terms {
            out.terms.insert((e0 + d0, e1 + d1), c.clone());
        }
        out
    }

    /// Substitute +1 or -1 for the variable at `var_idx`, returning a polynomial
    /// in the remaining variables. Total for any Laurent polynomial.
    pub fn substitute_sign(&self, var_idx: usize, value_is_minus_one: bool) -> Self {
        assert!(var_idx < self.vars.len());
        let rest: Vec<&str> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != var_idx)
            .map(|(_, s)| s.as_str())
            .collect();
        let mut out = Laurent::zero(&rest);
        for (&(e0, e1), c) in &self.terms {
            let (sub_exp, kept) = if var_idx == 0 { (e0, e1) } else { (e1, e0) };
            let sign = if value_is_minus_one && sub_exp.rem_euclid(2) == 1 {
                -BigInt::one()
            } else {
                BigInt::one()
            };
            let kept_exps: Vec<i64> = if rest.is_empty() { vec![] } else { vec![kept] };
            out.add_term(&kept_exps, c * sign);
        }
        out
    }

    /// Evaluate a 0- or 1-variable polynomial at +1/-1, returning the integer value.
    pub fn eval_sign(&self, value_is_minus_one: bool) -> BigInt {
        assert!(self.vars.len() <= 1, "eval_sign needs arity <= 1");
        let mut total = BigInt::zero();
        for (&(e0, _), c) in &self.terms {
            if value_is_minus_one && e0.rem_euclid(2) == 1 {
                total -= c;
            } else {
                total += c;
            }
        }
        total
    }

    /// Exponent range of the given variable: (min, max), or None if zero.
    pub fn exp_range(&self, var_idx: usize) -> Option<(i64, i64)> {
        assert!(var_idx < self.vars.len().max(1));
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for (&(e0, e1), _) in &self.terms {
            let e = if var_idx == 0 { e0 } else { e1 };
            lo = lo.min(e);
            hi = hi.max(e);
        }
        if self.terms.is_empty() {
            None
        } else {
            Some((lo, hi))
        }
    }

    /// Exact division by another polynomial; panics if not divisible.
    /// Used only for closed-form quotients that divide exactly.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        self.assert_compatible(divisor);
        assert_eq!(self.arity(), 1, "div_exact implemented for one variable");
        assert!(!divisor.is_zero(), "division by zero");
        let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        let mut rem = self.clone();
        let mut quot = Laurent::zero(&vars);
        let (_, dhi) = divisor.exp_range(0).unwrap();
        let dlead = divisor.coeff(&[dhi]);
        while !rem.is_zero() {
            let (_, rhi) = rem.exp_range(0).unwrap();
            let rlead = rem.coeff(&[rhi]);
            let (q, r) = num_integer::Integer::div_rem(&rlead, &dlead);
            assert!(r.is_zero(), "leading coefficient not divisible");
            let e = rhi - dhi;
            quot.add_term(&[e], q.clone());
            let sub = divisor.shift(&[e]).scale(&q);
            rem = &rem - &sub;
        }
        quot
    }

    /// Render with terms in ascending or descending exponent order,
    /// e.g. "q + q^3 + q^5u^2 + q^9u^3" or "t - 1 + t^-1".
    pub fn render(&self, descending: bool) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<(i64, i64)> = self.terms.keys().cloned().collect();
        if descending {
            keys.reverse();
        }
        let mut out = String::new();
        for (i, k) in keys.iter().enumerate() {
            let c = &self.terms[k];
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut mono = String::new();
            let exps = [k.0, k.1];
            for (vi, v) in self.vars.iter().enumerate() {
                let e = exps[vi];
                if e == 0 {
                    continue;
                }
                mono.push_str(v);
                if e != 1 {
                    mono.push('^');
                    mono.push_str(&e.to_string());
                }
            }
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                }
                out.push_str(&mono);
            }
        }
        out
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(false))
    }
}

impl std::ops::Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (&(e0, e1), c) in &rhs.terms {
            let entry = out.terms.entry((e0, e1)).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(&(e0, e1));
            }
        }
        out
    }
}

impl std::ops::Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        self + &rhs.neg()
    }
}

impl std::ops::Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        self.assert_compatible(rhs);
        let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        let mut out = Laurent::zero(&vars);
        for (&(a0, a1), ca) in &self.terms {
            for (&(b0, b1), cb) in &rhs.terms {
                let k = (a0 + b0, a1 + b1);
                let entry = out.terms.entry(k).or_insert_with(BigInt::zero);
                *entry += ca * cb;
                if entry.is_zero() {
                    out.terms.remove(&k);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_render() {
        let t = Laurent::monomial(&["t"], &[1], 1);
        let tinv = Laurent::monomial(&["t"], &[-1], 1);
        let one = Laurent::one(&["t"]);
        let trefoil = &(&t - &one) + &tinv;
        assert_eq!(trefoil.render(true), "t - 1 + t^-1");
        assert_eq!(trefoil.eval_sign(false), BigInt::from(1));
        assert_eq!(trefoil.eval_sign(true), BigInt::from(-3));
    }

    #[test]
    fn two_var_substitution() {
        // q^2 + q^6 u^2 + q^8 u^3 at u = -1 gives q^2 + q^6 - q^8
        let p = Laurent::from_terms(
            &["q", "u"],
            vec![(vec![2, 0], 1), (vec![6, 2], 1), (vec![8, 3], 1)],
        );
        assert_eq!(p.render(false), "q^2 + q^6u^2 + q^8u^3");
        let e = p.substitute_sign(1, true);
        assert_eq!(e.render(false), "q^2 + q^6 - q^8");
    }

    #[test]
    fn exact_division() {
        // (t^2 - 1) / (t - 1) = t + 1
        let p = Laurent::from_terms(&["t"], vec![(vec![2], 1), (vec![0], -1)]);
        let d = Laurent::from_terms(&["t"], vec![(vec![1], 1), (vec![0], -1)]);
        let q = p.div_exact(&d);
        assert_eq!(q.render(false), "1 + t");
    }
}
