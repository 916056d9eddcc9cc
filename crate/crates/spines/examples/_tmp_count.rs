use spines::branching::{enumerate_branchings, BranchedSpine};
use spines::enumerate::enumerate_spines;
use spines::canon::canonical_form;
use std::collections::BTreeSet;
fn main() {
    for n in 1..=2usize {
        let mut total = 0usize;
        let mut certs = BTreeSet::new();
        for s in enumerate_spines(n) {
            for b in enumerate_branchings(&s).unwrap() {
                let bs = BranchedSpine::new(s.clone(), b).unwrap();
                total += 1;
                certs.insert(canonical_form(&bs).unwrap());
            }
        }
        println!("n={n}: labeled={} canonical={}", total, certs.len());
    }
}
