use oneone::cover::extended_walk;
use oneone::diagram::FourTuple;
use oneone::floer::realize_cover;

#[test]
fn dump_bigons_5201() {
    let t = FourTuple::new(5, 2, 0, 1).unwrap();
    let walk = extended_walk(&t).unwrap();
    let r = realize_cover(&walk).unwrap();
    for h in walk.class_lines().unwrap() {
        let crossings = walk.line_crossings(h).unwrap();
        println!("line {h}: crossings {:?}", crossings.iter().map(|c| (c.x, c.residue)).collect::<Vec<_>>());
        for b in r.bigons_on_line(h).unwrap() {
            println!(
                "  bigon res {} -> res {}  (n_w {}, n_z {})  [crossing idx {} -> {}]",
                b.from_residue, b.to_residue, b.n_w, b.n_z, b.from_crossing, b.to_crossing
            );
        }
    }
}
