//! Dense polynomials over `F_p` with `u64` coefficients, ascending, trimmed.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: p is prime
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(result, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    result
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = mulmod(r[top], lead_inv, p);
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mulmod(c, mi, p)) % p;
        }
        r = trim(r);
    }
    r
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    rem(&out, m, p)
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `base^(p^k)` modulo `m`.
fn frobenius_power(base: &[u64], k: u32, m: &[u64], p: u64) -> Vec<u64> {
    let mut x = base.to_vec();
    for _ in 0..k {
        let mut result = vec![1u64];
        let mut b = x.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                result = mul_mod(&result, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        x = result;
    }
    x
}

/// Ben-Or irreducibility test for a monic `f` over `F_p`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.iter().map(|c| c % p).collect());
    let deg = f.len().saturating_sub(1);
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    let y = rem(&[0, 1], &f, p);
    let mut power = y.clone();
    for _ in 1..=deg / 2 {
        power = frobenius_power(&power, 1, &f, p);
        let g = gcd(&f, &sub(&power, &y, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert!(is_irreducible(&[1, 0, 1], 3)); // y^2 + 1 over F_3
        assert!(!is_irreducible(&[1, 0, 1], 5)); // 2^2 = -1 in F_5
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[0, 0, 1], 7));
        assert!(is_irreducible(&[1, 1, 0, 1], 2)); // y^3 + y + 1
        assert!(!is_irreducible(&[1, 0, 0, 0, 1], 3)); // y^4 + 1 splits into quadratics
    }

    #[test]
    fn matches_brute_force_for_quadratics() {
        for p in [2u64, 3, 5, 7] {
            for a in 0..p {
                for b in 0..p {
                    let has_root = (0..p).any(|x| (x * x + a * x + b) % p == 0);
                    assert_eq!(is_irreducible(&[b, a, 1], p), !has_root, "p={p} y^2+{a}y+{b}");
                }
            }
        }
    }
}
