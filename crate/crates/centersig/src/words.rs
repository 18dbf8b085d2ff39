//! Words over positive integer letters: compositions, shuffle sets, and the
//! combinatorial coefficients of the return-map expansion.

/// A composition (i_1, ..., i_k) of its weight; letters are >= 1.
pub type Word = Vec<u32>;

/// Weight = sum of letters.
pub fn weight(w: &[u32]) -> u32 {
    w.iter().sum()
}

/// All compositions of n with parts drawn from `parts`, in lexicographic
/// order. `parts` must be ascending.
pub fn compositions(n: u32, parts: &[u32]) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur: Word = Vec::new();
    fn rec(n: u32, parts: &[u32], cur: &mut Word, out: &mut Vec<Word>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for &p in parts {
            if p > n {
                break;
            }
            cur.push(p);
            rec(n - p, parts, cur, out);
            cur.pop();
        }
    }
    if n > 0 {
        rec(n, parts, &mut cur, &mut out);
    }
    out
}

/// The integer weight attached to the word (i_1, ..., i_k) in the expansion
/// of the return map: with n the weight and s_j = i_1 + ... + i_j the partial
/// sums, the product of (n - s_j + 1) over j = 1..k (the last factor is 1).
pub fn coeff_c(w: &[u32]) -> u64 {
    let n = weight(w) as u64;
    let mut acc = 1u64;
    let mut s = 0u64;
    for &i in w {
        s += i as u64;
        acc *= n - s + 1;
    }
    acc
}

/// All shuffles of u and v: interleavings preserving the internal order of
/// each factor. Duplicates are kept (the shuffle identity counts
/// multiplicities), and the output is in the order generated by taking from
/// u first.
pub fn shuffles(u: &[u32], v: &[u32]) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur: Word = Vec::with_capacity(u.len() + v.len());
    fn rec(u: &[u32], v: &[u32], cur: &mut Word, out: &mut Vec<Word>) {
        if u.is_empty() && v.is_empty() {
            out.push(cur.clone());
            return;
        }
        if let Some((&h, t)) = u.split_first() {
            cur.push(h);
            rec(t, v, cur, out);
            cur.pop();
        }
        if let Some((&h, t)) = v.split_first() {
            cur.push(h);
            rec(u, t, cur, out);
            cur.pop();
        }
    }
    rec(u, v, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_of_three_over_one_two() {
        let c = compositions(3, &[1, 2]);
        assert_eq!(c, vec![vec![1, 1, 1], vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn compositions_edge_cases() {
        assert_eq!(compositions(2, &[1, 2]), vec![vec![1, 1], vec![2]]);
        assert!(compositions(4, &[3]).is_empty());
        assert!(compositions(0, &[1]).is_empty());
        assert_eq!(compositions(3, &[3]), vec![vec![3]]);
    }

    #[test]
    fn composition_count_over_all_parts_is_power_of_two() {
        for n in 1..=12u32 {
            let parts: Vec<u32> = (1..=n).collect();
            let c = compositions(n, &parts);
            assert_eq!(c.len() as u64, 1u64 << (n - 1), "n = {n}");
            for w in &c {
                assert_eq!(weight(w), n);
            }
        }
    }

    #[test]
    fn compositions_are_lexicographic() {
        let c = compositions(6, &[1, 2, 3]);
        for pair in c.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn coeff_c_examples() {
        assert_eq!(coeff_c(&[1, 1]), 2);
        assert_eq!(coeff_c(&[1, 2]), 3);
        assert_eq!(coeff_c(&[2, 1]), 2);
        assert_eq!(coeff_c(&[2]), 1);
        assert_eq!(coeff_c(&[5]), 1);
        assert_eq!(coeff_c(&[1, 1, 1]), 6);
    }

    #[test]
    fn single_letter_words_have_unit_coefficient() {
        for n in 1..=10 {
            assert_eq!(coeff_c(&[n]), 1);
        }
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(shuffles(&[1], &[2]), vec![vec![1, 2], vec![2, 1]]);
        let s = shuffles(&[1, 1], &[1]);
        assert_eq!(s, vec![vec![1, 1, 1], vec![1, 1, 1], vec![1, 1, 1]]);
        assert_eq!(shuffles(&[1], &[2, 3]).len(), 3);
    }

    #[test]
    fn shuffle_counts_are_binomial() {
        fn binom(n: u64, k: u64) -> u64 {
            num_integer::binomial(n, k)
        }
        let u = vec![1, 2, 1];
        let v = vec![2, 2];
        assert_eq!(shuffles(&u, &v).len() as u64, binom(5, 3));
        let u2 = vec![1; 6];
        let v2 = vec![2; 5];
        assert_eq!(shuffles(&u2, &v2).len() as u64, binom(11, 6));
    }

    #[test]
    fn shuffles_preserve_weight() {
        let u = vec![2, 1];
        let v = vec![3];
        for w in shuffles(&u, &v) {
            assert_eq!(weight(&w), weight(&u) + weight(&v));
        }
    }
}
