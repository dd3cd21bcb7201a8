//! Argument value parsers.

use num_complex::Complex64;

use henon_core::Window;

/// Parses `3`, `-2.5`, `0.1i`, `i`, `-i`, `1+1i`, `-3+0.5i`, `1e-3-2e2i`.
/// `j` is accepted in place of `i`.
pub fn complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || format!("invalid complex number {s:?} (expected forms like 2, 0.1i, 1+1i)");
    if t.is_empty() {
        return Err(err());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| err());
    };
    // Split at the last sign that is not leading and not part of an exponent.
    let bytes = body.as_bytes();
    let split =
        (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re.is_empty() { 0.0 } else { re.parse::<f64>().map_err(|_| err())? };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| err())?,
    };
    Ok(Complex64::new(re, im))
}

/// Parses `min_x,max_x,min_y,max_y`.
pub fn window(s: &str) -> Result<Window, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("invalid window {s:?}: {e}"))?;
    match v[..] {
        [min_x, max_x, min_y, max_y] => Ok(Window { min_x, max_x, min_y, max_y }),
        _ => Err(format!("window needs four comma-separated numbers, got {s:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_forms() {
        assert_eq!(complex("2").unwrap(), c(2.0, 0.0));
        assert_eq!(complex("-2.5").unwrap(), c(-2.5, 0.0));
        assert_eq!(complex("0.1i").unwrap(), c(0.0, 0.1));
        assert_eq!(complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(complex("1+1i").unwrap(), c(1.0, 1.0));
        assert_eq!(complex("1+i").unwrap(), c(1.0, 1.0));
        assert_eq!(complex("-3+0.5i").unwrap(), c(-3.0, 0.5));
        assert_eq!(complex("1e-3-2e2i").unwrap(), c(1e-3, -200.0));
        assert_eq!(complex("2.5e+1j").unwrap(), c(0.0, 25.0));
        assert_eq!(complex(" 4 - 2i ").unwrap(), c(4.0, -2.0));
        for bad in ["", "x", "1+", "1+2", "1++2i", "ii"] {
            assert!(complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn window_forms() {
        let w = window("-10,10,-5,5").unwrap();
        assert_eq!((w.min_x, w.max_x, w.min_y, w.max_y), (-10.0, 10.0, -5.0, 5.0));
        assert!(window("1,2,3").is_err());
        assert!(window("1,2,3,x").is_err());
    }
}
