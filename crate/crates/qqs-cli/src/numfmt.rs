//! Fixed 9-significant-digit number formatting for golden-file-stable CSV
//! output ('%g'-style: fixed notation in a moderate exponent window,
//! scientific outside it, trailing zeros trimmed).

pub fn g9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let neg = x < 0.0;
    // {:.8e} rounds to 9 significant digits and normalizes the exponent.
    let sci = format!("{:.8e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("scientific form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: Vec<u8> = mantissa.bytes().filter(|b| *b != b'.').collect();
    debug_assert_eq!(digits.len(), 9);

    let body = if (-4..9).contains(&exp) {
        if exp >= 0 {
            let ip = (exp + 1) as usize;
            let int_part = std::str::from_utf8(&digits[..ip]).unwrap();
            let frac = std::str::from_utf8(&digits[ip..])
                .unwrap()
                .trim_end_matches('0');
            if frac.is_empty() {
                int_part.to_string()
            } else {
                format!("{int_part}.{frac}")
            }
        } else {
            let frac = std::str::from_utf8(&digits).unwrap().trim_end_matches('0');
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), frac)
        }
    } else {
        let head = digits[0] as char;
        let tail = std::str::from_utf8(&digits[1..])
            .unwrap()
            .trim_end_matches('0');
        if tail.is_empty() {
            format!("{head}e{exp}")
        } else {
            format!("{head}.{tail}e{exp}")
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_common_values() {
        assert_eq!(g9(0.0), "0");
        assert_eq!(g9(-0.0), "0");
        assert_eq!(g9(2.0), "2");
        assert_eq!(g9(-2.0), "-2");
        assert_eq!(g9(0.5), "0.5");
        assert_eq!(g9(1.0 / 3.0), "0.333333333");
        assert_eq!(g9(123456789.0), "123456789");
        assert_eq!(g9(1234567890.0), "1.23456789e9");
        assert_eq!(g9(0.0001), "0.0001");
        assert_eq!(g9(0.00001), "1e-5");
        assert_eq!(g9(1.5e-12), "1.5e-12");
        assert_eq!(g9(43.6666667), "43.6666667");
    }

    #[test]
    fn rounding_can_carry_into_the_exponent() {
        assert_eq!(g9(9.999999996e8), "1e9");
        assert_eq!(g9(0.999999999499), "0.999999999");
        assert_eq!(g9(0.9999999996), "1");
    }
}
