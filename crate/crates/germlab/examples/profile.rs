use germlab::parse::parse_germ;
use germlab::tower::Tower;
use std::time::Instant;

fn main() {
    let expr = std::env::args().nth(1).unwrap_or_else(|| "(x - y^2)^2*(x - y^3)^2*(x - y^4)*(x - 2*y^4)*(x - 3*y^4) - 6*y^22".into());
    let g = parse_germ(&expr).unwrap();
    let t0 = Instant::now();
    let layers = g.yun_x().unwrap();
    println!("yun: {:?} -> {} layers", t0.elapsed(), layers.len());
    for (f, m) in &layers {
        println!("  layer mult {}: deg_x {:?}", m, f.deg_x());
    }
    let t0 = Instant::now();
    let gx = g.partial_x();
    let c = g.gcd_x(&gx);
    println!("gcd(f,fx): {:?} -> deg {:?}", t0.elapsed(), c.deg_x());
    let t0 = Instant::now();
    let mut tower = Tower::base();
    let e = germlab::expand::Expansion::germ_roots(&mut tower, &g).unwrap();
    println!("expand f: {:?} -> {} sheets, total {}", t0.elapsed(), e.sheets.len(), e.total_mult);
    let t0 = Instant::now();
    let e2 = germlab::expand::Expansion::germ_roots(&mut tower, &gx).unwrap();
    println!("expand fx: {:?} -> {} sheets, total {}", t0.elapsed(), e2.sheets.len(), e2.total_mult);
    println!("tower: {}", tower);
}
