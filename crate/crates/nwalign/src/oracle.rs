//! Brute-force reference oracles for differential testing.
//!
//! These are deliberately naive: plain recursion over prefix lengths with no
//! memoization and no shared code with the matrix engines. They are the
//! ground truth that the self-test suite and the acceptance tests compare
//! the real engines against. Do not "optimize" them into the very dynamic
//! program they are meant to check.

use std::collections::BTreeSet;

use crate::scoring::ScoringScheme;
use crate::seq::GAP;

/// Maximum global alignment score by exhaustive recursion.
///
/// Work grows roughly like the Delannoy numbers, so keep inputs short
/// (lengths up to ~10 are fine, the exhaustive suites use <= 7).
pub fn max_alignment_score(a: &[u8], b: &[u8], scheme: &ScoringScheme) -> i64 {
    fn go(a: &[u8], b: &[u8], i: usize, j: usize, scheme: &ScoringScheme) -> i64 {
        if i == 0 && j == 0 {
            return 0;
        }
        let mut best = i64::MIN;
        if i > 0 && j > 0 {
            let sub = scheme.substitution(a[i - 1], b[j - 1]);
            best = go(a, b, i - 1, j - 1, scheme) + sub;
        }
        if i > 0 {
            best = best.max(go(a, b, i - 1, j, scheme) + scheme.gap_penalty);
        }
        if j > 0 {
            best = best.max(go(a, b, i, j - 1, scheme) + scheme.gap_penalty);
        }
        best
    }
    go(a, b, a.len(), b.len(), scheme)
}

/// Every optimal global alignment of `a` and `b`, as gapped row pairs.
///
/// Enumerates all alignment paths, keeping the set that attains the maximum
/// score. The rows come back deduplicated and ordered (BTreeSet), which
/// makes exact set comparison against engine output trivial.
pub fn optimal_alignments(
    a: &[u8],
    b: &[u8],
    scheme: &ScoringScheme,
) -> BTreeSet<(String, String)> {
    struct State<'s> {
        a: &'s [u8],
        b: &'s [u8],
        scheme: &'s ScoringScheme,
        row_a: Vec<u8>,
        row_b: Vec<u8>,
        best: i64,
        out: BTreeSet<(String, String)>,
    }

    fn go(st: &mut State<'_>, i: usize, j: usize, score: i64) {
        if i == st.a.len() && j == st.b.len() {
            if score > st.best {
                st.best = score;
                st.out.clear();
            }
            if score == st.best {
                st.out.insert((
                    String::from_utf8(st.row_a.clone()).unwrap(),
                    String::from_utf8(st.row_b.clone()).unwrap(),
                ));
            }
            return;
        }
        if i < st.a.len() && j < st.b.len() {
            let sub = st.scheme.substitution(st.a[i], st.b[j]);
            st.row_a.push(st.a[i]);
            st.row_b.push(st.b[j]);
            go(st, i + 1, j + 1, score + sub);
            st.row_a.pop();
            st.row_b.pop();
        }
        if i < st.a.len() {
            st.row_a.push(st.a[i]);
            st.row_b.push(GAP);
            go(st, i + 1, j, score + st.scheme.gap_penalty);
            st.row_a.pop();
            st.row_b.pop();
        }
        if j < st.b.len() {
            st.row_a.push(GAP);
            st.row_b.push(st.b[j]);
            go(st, i, j + 1, score + st.scheme.gap_penalty);
            st.row_a.pop();
            st.row_b.pop();
        }
    }

    let mut st = State {
        a,
        b,
        scheme,
        row_a: Vec::new(),
        row_b: Vec::new(),
        best: i64::MIN,
        out: BTreeSet::new(),
    };
    go(&mut st, 0, 0, 0);
    st.out
}

/// All strings over `alphabet` of length 0 through `max_len`, in length
/// then lexicographic order. Support for the exhaustive suites.
pub fn all_strings(alphabet: &[u8], max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * alphabet.len());
        for prefix in &frontier {
            for &sym in alphabet {
                let mut s = prefix.clone();
                s.push(sym);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
