//! Random retracts, contractions and homotopy inverses with their identities
//! checked exactly.

use std::sync::Arc;

use chainrebuild::htpy::{contract_acyclic, homotopy_inverse};
use chainrebuild::random::{collapse_retract, identity_suite, random_complex, random_retract, rng, Limits};
use chainrebuild::zchain::{cone_complex, GradedMap};

fn main() -> chainrebuild::Result<()> {
    let mut r = rng(42);
    let lim = Limits::default();
    let ret = random_retract(&mut r, &lim)?;
    println!("retract {:?} -> {:?}", ret.x.ranks(), ret.xp.ranks());

    let x = Arc::new(random_complex(&mut r, &lim));
    let c = Arc::new(cone_complex(&GradedMap::identity(x.clone())));
    let s = contract_acyclic(&c)?;
    s.verify()?;
    println!("contracted Cone(id) with ranks {:?}", c.ranks());

    let small = Arc::new(random_complex(&mut r, &Limits { max_rank: 2, ..lim }));
    let q = collapse_retract(&x, &small)?.xi;
    let inv = homotopy_inverse(&q)?;
    println!("homotopy inverse {:?} -> {:?}", inv.r.source().ranks(), inv.r.target().ranks());

    let rep = identity_suite(1, 50, &lim);
    println!("identity suite: {} cases, {} failures", rep.cases, rep.failures.len());
    Ok(())
}
