//! Dirichlet characters with values in `{-1, 0, 1}`.

use serde::Serialize;

use crate::arith::gcd;
use crate::error::{Error, Result};

/// Kronecker symbol `(a / n)`.
pub fn kronecker(a: i64, n: i64) -> i64 {
    if n == 0 {
        return (a.abs() == 1) as i64;
    }
    let mut result = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let mut a = a;
    // factor of 2 in n
    let mut twos = 0;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // Jacobi (a / n) for odd positive n
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// A character `(Z/N)^* -> {+-1}` extended by zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Character {
    Trivial { modulus: u64 },
    /// `n -> (disc / n)` on units mod `modulus`.
    Quadratic { modulus: u64, disc: i64 },
}

impl Character {
    pub fn trivial(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        Ok(Character::Trivial { modulus })
    }

    /// Fails unless `(disc / .)` restricted to units has period `modulus`.
    pub fn quadratic(modulus: u64, disc: i64) -> Result<Self> {
        let chi = Character::Quadratic { modulus, disc };
        if modulus == 0 || disc == 0 {
            return Err(Error::InvalidArgument("modulus and discriminant must be nonzero".into()));
        }
        for n in 1..=modulus {
            let v = chi.value(n);
            if chi.value(n + modulus) != v || (gcd(n, modulus) == 1 && v == 0) {
                return Err(Error::InvalidArgument(format!(
                    "({disc}/.) is not a character mod {modulus}"
                )));
            }
        }
        Ok(chi)
    }

    pub fn modulus(&self) -> u64 {
        match *self {
            Character::Trivial { modulus } | Character::Quadratic { modulus, .. } => modulus,
        }
    }

    pub fn value(&self, n: u64) -> i64 {
        let m = self.modulus();
        if gcd(n, m) != 1 {
            return 0;
        }
        match *self {
            Character::Trivial { .. } => 1,
            Character::Quadratic { disc, .. } => kronecker(disc, n as i64),
        }
    }

    /// `chi(-1)`.
    pub fn parity(&self) -> i64 {
        let m = self.modulus();
        if m == 1 {
            return 1;
        }
        self.value(m - 1)
    }
}
