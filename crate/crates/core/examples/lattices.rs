//! Atom-set and arc-set lattices.

use std::f64::consts::PI;

use unitary_asymptotes::atomset::AtomSet;
use unitary_asymptotes::models::ArcSet;

fn main() -> unitary_asymptotes::Result<()> {
    let a = AtomSet::from_indices(1, 6, &[0, 2, 4]);
    let b = AtomSet::from_indices(1, 6, &[1, 2, 3]);
    println!("a | b = {:?}", a.join(&b)?.iter().collect::<Vec<_>>());
    println!("a & b = {:?}", a.meet(&b)?.iter().collect::<Vec<_>>());
    println!("a \\ b = {:?}", a.difference(&b)?.iter().collect::<Vec<_>>());
    println!("complement of a = {:?}", a.complement().iter().collect::<Vec<_>>());
    let other = AtomSet::full(2, 6);
    println!("mixing measures: {}", a.join(&other).unwrap_err());

    let upper = ArcSet::arc(0.0, PI);
    let wrap = ArcSet::arc(1.5 * PI, 0.25 * PI);
    println!("upper | wrap = {:?}, measure {}", upper.join(&wrap).arcs(), upper.join(&wrap).measure());
    println!("upper & wrap = {:?}, measure {}", upper.meet(&wrap).arcs(), upper.meet(&wrap).measure());
    println!("complement of wrap = {:?}", wrap.complement().arcs());
    Ok(())
}
