#![allow(dead_code)]

use cram::{XComplex, XReal};

pub const FIXTURE: &str = include_str!("../fixtures/pfd_tables.txt");

/// One transcribed coefficient: order, name (`alpha0`, `theta3`, ...) and
/// the normalized real and imaginary literals.
pub struct Row {
    pub order: usize,
    pub name: String,
    pub re: String,
    pub im: String,
}

/// `-8.897 773 x10^0` -> `-8.897773e0`
pub fn normalize(typeset: &str) -> String {
    let s: String = typeset.chars().filter(|c| !c.is_whitespace()).collect();
    s.replace("x10^", "e")
}

pub fn fixture_rows() -> Vec<Row> {
    FIXTURE
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let parts: Vec<&str> = l.split('|').collect();
            assert_eq!(parts.len(), 3, "bad fixture line {l:?}");
            let mut head = parts[0].split_whitespace();
            let order = head.next().unwrap().parse().unwrap();
            let name = head.next().unwrap().to_string();
            Row { order, name, re: normalize(parts[1]), im: normalize(parts[2]) }
        })
        .collect()
}

pub fn fixture_value(row: &Row, digits: usize) -> XComplex {
    XComplex::new(XReal::parse(&row.re, digits).unwrap(), XReal::parse(&row.im, digits).unwrap())
}

/// Compares every builtin coefficient of `order` with the fixture by the
/// canonical decimal strings. Returns mismatching names.
pub fn table_mismatches(order: usize) -> Vec<String> {
    let set = cram::builtin_set(order).unwrap();
    let mut bad = Vec::new();
    let mut seen = 0;
    for row in fixture_rows().iter().filter(|r| r.order == order) {
        seen += 1;
        let value = fixture_value(row, 64);
        let builtin = if row.name == "alpha0" {
            set.alpha0.clone()
        } else if let Some(j) = row.name.strip_prefix("theta") {
            set.poles[j.parse::<usize>().unwrap() - 1].clone()
        } else if let Some(j) = row.name.strip_prefix("alpha") {
            set.residues[j.parse::<usize>().unwrap() - 1].clone()
        } else {
            panic!("unknown fixture name {}", row.name)
        };
        let same = builtin.re.to_exact_string() == value.re.to_exact_string()
            && builtin.im.to_exact_string() == value.im.to_exact_string();
        if !same {
            bad.push(row.name.clone());
        }
    }
    if seen != order + 1 {
        bad.push(format!("fixture has {seen} rows for order {order}"));
    }
    bad
}

/// Published digits of e.
pub const E_120: &str = "2.71828182845904523536028747135266249775724709369995957496696762772407663035354759457138217852516642742746639193200305992";
