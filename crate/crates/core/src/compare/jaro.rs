//! Jaro and Jaro-Winkler similarity over Unicode scalar values.

/// Prefix scale applied by [`jaro_winkler`].
pub const PREFIX_SCALE: f64 = 0.1;
/// Longest common prefix that earns a bonus.
pub const MAX_PREFIX: usize = 4;

/// Standard Jaro similarity.
///
/// Two characters match when equal and no further apart than
/// `max(|s1|, |s2|) / 2 - 1`; `t` is half the number of matched characters
/// that appear in a different order. Returns 0 when nothing matches and 1 for
/// identical strings (including two empty ones).
pub fn jaro(s1: &str, s2: &str) -> f64 {
    let a: Vec<char> = s1.chars().collect();
    let b: Vec<char> = s2.chars().collect();
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let window = (a.len().max(b.len()) / 2).saturating_sub(1);

    let mut b_taken = vec![false; b.len()];
    let mut a_matched = Vec::with_capacity(a.len());
    for (i, ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !b_taken[j] && b[j] == *ca {
                b_taken[j] = true;
                a_matched.push(*ca);
                break;
            }
        }
    }
    let m = a_matched.len();
    if m == 0 {
        return 0.0;
    }
    let b_matched = b.iter().zip(&b_taken).filter(|(_, taken)| **taken).map(|(c, _)| c);
    let half_transpositions = a_matched.iter().zip(b_matched).filter(|(x, y)| x != y).count();
    let t = half_transpositions as f64 / 2.0;
    let m = m as f64;
    (m / a.len() as f64 + m / b.len() as f64 + (m - t) / m) / 3.0
}

/// Jaro similarity boosted by the shared prefix:
/// `jw = dj + l * 0.1 * (1 - dj)` with `l` capped at 4.
pub fn jaro_winkler(s1: &str, s2: &str) -> f64 {
    let dj = jaro(s1, s2);
    let prefix = s1.chars().zip(s2.chars()).take_while(|(x, y)| x == y).take(MAX_PREFIX).count();
    (dj + prefix as f64 * PREFIX_SCALE * (1.0 - dj)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn worked_examples() {
        assert!(close(jaro("fone", "ofne"), 0.9167, 0.0005));
        assert_eq!(jaro("abc", "abc"), 1.0);
        assert_eq!(jaro("abc", "xyz"), 0.0);
        assert!(close(jaro("martha", "marhta"), 0.9444, 0.00005));
        assert!(close(jaro_winkler("martha", "marhta"), 0.9611, 0.00005));
        assert_eq!(jaro_winkler("fone", "ofne"), jaro("fone", "ofne"));
        assert!(close(jaro("Trans", "Transporte"), 0.8333, 0.00005));
        assert!(close(jaro_winkler("Trans", "Transporte"), 0.9, 1e-12));
    }

    #[test]
    fn edge_cases() {
        assert_eq!(jaro("", ""), 1.0);
        assert_eq!(jaro("", "a"), 0.0);
        assert_eq!(jaro("a", "a"), 1.0);
        assert_eq!(jaro("a", "b"), 0.0);
        // non-ASCII counts by character, not byte
        assert_eq!(jaro_winkler("Ligação", "Ligação"), 1.0);
        assert!(jaro_winkler("fone", "Ligação") < 0.85);
    }
}
