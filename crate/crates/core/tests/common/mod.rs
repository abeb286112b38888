#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use hopfforge::abgroup::{FiniteAbelianGroup, GroupElement, SkewForm};
use hopfforge::hd::Datum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn datum(factors: &[u32], conductor: u32, e: &[&[i64]], n: &[(&[u32], u32)]) -> Datum {
    let g = FiniteAbelianGroup::new(factors.to_vec()).unwrap();
    let f = SkewForm::new(g.clone(), conductor, e.iter().map(|r| r.to_vec()).collect()).unwrap();
    let n: BTreeMap<GroupElement, u32> = n.iter().map(|(k, v)| (GroupElement(k.to_vec()), *v)).collect();
    Datum::new(g, f, n).unwrap()
}

/// `H(n)`: `G = Z_2`, `F(g,g) = -1`, `n_g = n`.
pub fn h(n: u32) -> Datum {
    if n == 0 {
        datum(&[2], 2, &[&[1]], &[])
    } else {
        datum(&[2], 2, &[&[1]], &[(&[1], n)])
    }
}

/// `Z_2×Z_2` with `F(e_i, e_j) = (-1)^{δ_ij}`.
pub fn klein(n1: u32, n2: u32) -> Datum {
    let mut n: Vec<(&[u32], u32)> = Vec::new();
    if n1 > 0 {
        n.push((&[1, 0], n1));
    }
    if n2 > 0 {
        n.push((&[0, 1], n2));
    }
    datum(&[2, 2], 2, &[&[1, 0], &[0, 1]], &n)
}

pub const Z44_FORM: [&[i64]; 2] = [&[2, 1], &[3, 2]];

pub fn z44(n: &[(&[u32], u32)]) -> Datum {
    datum(&[4, 4], 4, &Z44_FORM, n)
}

/// Valid data whose algebras have dimension at most 32.
pub fn small_fixtures() -> Vec<(&'static str, Datum)> {
    vec![
        ("H(0)", h(0)),
        ("H(1)", h(1)),
        ("H(2)", h(2)),
        ("H(3)", h(3)),
        ("Z2xZ2 n=(1,0)", klein(1, 0)),
        ("Z2xZ2 n=(1,1)", klein(1, 1)),
        ("Z2xZ2 n=(2,1)", klein(2, 1)),
        ("Z4xZ4 n=0", z44(&[])),
    ]
}

/// A random valid datum with `dim ≤ max_dim`, determined by `seed`.
pub fn random_datum(seed: u64, max_dim: usize) -> Datum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases: Vec<(Vec<u32>, u32, Vec<Vec<i64>>)> = vec![
        (vec![2], 2, vec![vec![1]]),
        (vec![2, 2], 2, vec![vec![1, 0], vec![0, 1]]),
        (vec![2, 2], 2, vec![vec![1, 1], vec![1, 0]]),
        (vec![2, 2], 2, vec![vec![0, 1], vec![1, 0]]),
        (vec![4, 4], 4, vec![vec![2, 1], vec![3, 2]]),
        (vec![2, 2, 2], 2, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
    ];
    let (factors, conductor, e) = bases[rng.gen_range(0..bases.len())].clone();
    let g = FiniteAbelianGroup::new(factors).unwrap();
    let f = SkewForm::new(g.clone(), conductor, e).unwrap();
    assert!(f.is_valid());
    let i_f = f.u_f_and_i_f().unwrap().i_f;
    let mut n = BTreeMap::new();
    let mut total = 0u32;
    for x in i_f {
        let v = rng.gen_range(0..3u32);
        if v > 0 && (g.order() << (total + v)) <= max_dim {
            n.insert(x, v);
            total += v;
        }
    }
    Datum::new(g, f, n).unwrap()
}

/// Number of non-degenerate skew forms at conductor `exp(G)`, counted by
/// running through every integer matrix mod N and applying the definitions.
pub fn brute_force_form_count(factors: &[u32]) -> usize {
    let r = factors.len();
    let n = factors.iter().fold(1u32, |a, &b| num_lcm(a, b)) as i64;
    let elements: Vec<Vec<i64>> = {
        let mut out = vec![vec![]];
        for &d in factors {
            out = out
                .into_iter()
                .flat_map(|v| (0..d as i64).map(move |k| [v.clone(), vec![k]].concat()))
                .collect();
        }
        out
    };
    let eval = |e: &[i64], x: &[i64], y: &[i64]| -> i64 {
        let mut s = 0;
        for i in 0..r {
            for j in 0..r {
                s += e[i * r + j] * x[i] * y[j];
            }
        }
        s.rem_euclid(n)
    };
    let mut count = 0;
    let total = (n as u64).pow((r * r) as u32);
    for code in 0..total {
        let mut c = code;
        let e: Vec<i64> = (0..r * r)
            .map(|_| {
                let v = (c % n as u64) as i64;
                c /= n as u64;
                v
            })
            .collect();
        // Well defined on Z_{d_i}: changing a coordinate by d_i changes nothing.
        let well_defined = elements.iter().all(|x| {
            (0..r).all(|i| {
                let mut x2 = x.clone();
                x2[i] += factors[i] as i64;
                elements.iter().all(|y| eval(&e, &x2, y) == eval(&e, x, y) && eval(&e, y, &x2) == eval(&e, y, x))
            })
        });
        if !well_defined {
            continue;
        }
        let skew = elements
            .iter()
            .all(|x| elements.iter().all(|y| (eval(&e, x, y) + eval(&e, y, x)) % n == 0));
        if !skew {
            continue;
        }
        let rows: HashSet<Vec<i64>> = elements
            .iter()
            .map(|x| elements.iter().map(|y| eval(&e, x, y)).collect())
            .collect();
        if rows.len() == elements.len() {
            count += 1;
        }
    }
    count
}

fn num_lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}
