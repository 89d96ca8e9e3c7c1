//! Narrow and wide class numbers against cycles of Zagier-reduced forms.

use plectic_core::quadarith::{class_data, is_squarefree, QuadField};
use std::collections::HashMap;

/// Forms `a x^2 - b x + c` with `a, c > 0`, `b > a + c`, `b^2 - 4ac = D`,
/// primitive.
fn zagier_reduced(d: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    let mut b = 1;
    while b * b <= d {
        b += 1;
    }
    while b <= d + 2 {
        let rest = b * b - d;
        if rest % 4 == 0 {
            let ac = rest / 4;
            for a in 1..=ac {
                if ac % a != 0 {
                    continue;
                }
                let c = ac / a;
                if b > a + c && gcd(gcd(a, b), c) == 1 {
                    out.push((a, b, c));
                }
            }
        }
        b += 1;
    }
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `w = (b + sqrt D)/(2a)` goes to `1/(n - w)`, `n = ceil(w)`.
fn step(f: (i64, i64, i64), d: i64) -> (i64, i64, i64) {
    let (a, b, c) = f;
    let w = (b as f64 + (d as f64).sqrt()) / (2.0 * a as f64);
    let n = w.ceil() as i64;
    (a * n * n - b * n + c, 2 * a * n - b, a)
}

/// Cycle label of every reduced form.
fn cycles(d: i64) -> HashMap<(i64, i64, i64), usize> {
    let forms = zagier_reduced(d);
    let mut label = HashMap::new();
    let mut next = 0;
    for &f in &forms {
        if label.contains_key(&f) {
            continue;
        }
        let mut g = f;
        loop {
            label.insert(g, next);
            g = step(g, d);
            if g == f {
                break;
            }
            assert!(forms.contains(&g), "step left the reduced set at {g:?}");
        }
        next += 1;
    }
    label
}

/// Cycle of `f` composed with the negative principal form, which in these
/// coordinates is `(-a, b, -c)`.
fn negated_cycle(f: (i64, i64, i64), d: i64, label: &HashMap<(i64, i64, i64), usize>) -> usize {
    let (a, b, c) = f;
    let mut g = (-a, b, -c);
    for _ in 0..10_000 {
        if let Some(&l) = label.get(&g) {
            return l;
        }
        let (a, b, c) = g;
        let w = (b as f64 + (d as f64).sqrt()) / (2.0 * a as f64);
        let n = w.ceil() as i64;
        g = (a * n * n - b * n + c, 2 * a * n - b, a);
    }
    panic!("no reduction for {f:?}");
}

fn oracle(d: i64) -> (usize, usize) {
    let label = cycles(d);
    let narrow = label.values().copied().max().map_or(0, |x| x + 1);
    let mut parent: Vec<usize> = (0..narrow).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for (&f, &l) in &label {
        let other = negated_cycle(f, d, &label);
        let (x, y) = (find(&mut parent, l), find(&mut parent, other));
        parent[x] = y;
    }
    let wide = (0..narrow).filter(|&x| find(&mut parent, x) == x).count();
    (narrow, wide)
}

#[test]
fn anchors() {
    assert_eq!(oracle(5), (1, 1));
    assert_eq!(oracle(12), (2, 1));
    let c = class_data(5).unwrap();
    assert_eq!((c.narrow_class_number, c.class_number), (1, 1));
    let c = class_data(3).unwrap();
    assert_eq!(c.narrow_class_number, 2);
}

#[test]
fn class_numbers_match_zagier_cycles_up_to_200() {
    for m in 2..=200 {
        if !is_squarefree(m) {
            continue;
        }
        let field = QuadField::new(m).unwrap();
        let c = class_data(m).unwrap();
        let (narrow, wide) = oracle(field.d);
        assert_eq!(c.narrow_class_number, narrow, "narrow, m = {m}");
        assert_eq!(c.class_number, wide, "wide, m = {m}");
        let h = c.class_number;
        assert!(c.narrow_class_number == h || c.narrow_class_number == 2 * h);
        assert_eq!(c.narrow_class_number == h, c.unit_norm == -1, "norm rule, m = {m}");
    }
}
