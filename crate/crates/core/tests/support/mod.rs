//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

/// Full-table Wagner-Fischer over chars.
pub fn levenshtein_table(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[a.len()][b.len()]
}

type Gram = Vec<String>;

/// Multiset of n-grams as a list of (gram, count) found by linear search.
#[derive(Clone, Default)]
struct Bag(Vec<(Gram, usize)>);

impl Bag {
    fn of(tokens: &[String], n: usize, times: usize) -> Bag {
        let mut bag = Bag::default();
        if tokens.len() >= n {
            for start in 0..=tokens.len() - n {
                bag.add(tokens[start..start + n].to_vec(), times);
            }
        }
        bag
    }
    fn add(&mut self, g: Gram, k: usize) {
        match self.0.iter_mut().find(|(h, _)| *h == g) {
            Some(slot) => slot.1 += k,
            None => self.0.push((g, k)),
        }
    }
    fn get(&self, g: &Gram) -> usize {
        self.0.iter().find(|(h, _)| h == g).map_or(0, |e| e.1)
    }
    fn min_with(&self, other: &Bag) -> Bag {
        Bag(self
            .0
            .iter()
            .map(|(g, k)| (g.clone(), (*k).min(other.get(g))))
            .filter(|e| e.1 > 0)
            .collect())
    }
    fn minus(&self, other: &Bag) -> Bag {
        Bag(self
            .0
            .iter()
            .map(|(g, k)| (g.clone(), k.saturating_sub(other.get(g))))
            .filter(|e| e.1 > 0)
            .collect())
    }
    fn has(&self, g: &Gram) -> bool {
        self.get(g) > 0
    }
}

fn mean_ratio(good: &Bag, over: &Bag) -> Option<f64> {
    (!over.0.is_empty()).then(|| {
        over.0
            .iter()
            .map(|(g, k)| good.get(g) as f64 / *k as f64)
            .sum::<f64>()
            / over.0.len() as f64
    })
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

/// SARI straight from the definition, with the vacuous convention made explicit.
pub fn sari_oracle(src: &[String], out: &[String], refs: &[Vec<String>], one: bool) -> f64 {
    let m = refs.len();
    let mut total = 0.0;
    for n in 1..=4 {
        let s = Bag::of(src, n, m);
        let c = Bag::of(out, n, m);
        let mut r = Bag::default();
        for reference in refs {
            for (g, k) in Bag::of(reference, n, 1).0 {
                r.add(g, k);
            }
        }
        let keep_sys = s.min_with(&c);
        let keep_good = keep_sys.min_with(&r);
        let keep_all = s.min_with(&r);
        let keep = match (
            mean_ratio(&keep_good, &keep_sys),
            mean_ratio(&keep_good, &keep_all),
        ) {
            (None, None) if one => 1.0,
            (p, q) => harmonic(p.unwrap_or(0.0), q.unwrap_or(0.0)),
        };
        let del_sys = s.minus(&c);
        let del_good = del_sys.minus(&r);
        let del_all = s.minus(&r);
        let delete = match mean_ratio(&del_good, &del_sys) {
            None if one && del_all.0.is_empty() => 1.0,
            p => p.unwrap_or(0.0),
        };
        let add_sys: Vec<&Gram> = c.0.iter().map(|e| &e.0).filter(|g| !s.has(g)).collect();
        let add_all: Vec<&Gram> = r.0.iter().map(|e| &e.0).filter(|g| !s.has(g)).collect();
        let good = add_sys.iter().filter(|g| r.has(g)).count() as f64;
        let add = if one && add_sys.is_empty() && add_all.is_empty() {
            1.0
        } else {
            let p = if add_sys.is_empty() {
                0.0
            } else {
                good / add_sys.len() as f64
            };
            let q = if add_all.is_empty() {
                0.0
            } else {
                good / add_all.len() as f64
            };
            harmonic(p, q)
        };
        total += (keep + delete + add) / 3.0;
    }
    100.0 * total / 4.0
}
