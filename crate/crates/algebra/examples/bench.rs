//! Times the resolution oracle on the largest instances inside the default caps.

use std::time::Instant;

use bei_algebra::oracle::{oracle_resolution, OracleCaps};
use bei_algebra::F32003;
use bei_core::{Atom, FanSpec, GraphExpr, MarkRef};

fn main() {
    let fp3 = || GraphExpr::atom(Atom::Fp(3));
    let cases = vec![
        ("Fp(3), m=3", fp3(), 3),
        ("circ(Fp(3)@6, Fp(3)@1), m=2", GraphExpr::circ(fp3(), MarkRef::local(6), fp3(), MarkRef::local(1)), 2),
        (
            "fan(4; W=[[1],[2]]), m=3",
            GraphExpr::atom(Atom::Fan(FanSpec::pure(4, vec![vec![1], vec![2]]).unwrap())),
            3,
        ),
        ("star(Fp(2)@4, path(3)@1), m=3", GraphExpr::star(GraphExpr::atom(Atom::Fp(2)), MarkRef::local(4), GraphExpr::atom(Atom::Path(3)), MarkRef::local(1)), 3),
    ];
    let caps = OracleCaps::default();
    for (name, e, m) in cases {
        let g = e.realize().unwrap().graph().clone();
        let t = Instant::now();
        let r = oracle_resolution::<F32003>(&g, m, &caps).unwrap();
        println!(
            "{name}: depth {:?} reg {:?}, gb {}, frame {:?}, {:.2?}",
            r.betti.depth(),
            r.betti.reg(),
            r.gb_size,
            r.frame_sizes,
            t.elapsed()
        );
        print!("{}", r.betti.grid());
    }
}
