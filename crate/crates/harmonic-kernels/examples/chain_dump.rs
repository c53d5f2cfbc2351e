use harmonic_kernels::bergman_chain::bergman_chain;
use harmonic_kernels::poisson_recursion::center_profile;
use harmonic_kernels::symbol_algebra::DomainSpec;

fn main() {
    let n: usize = std::env::args().nth(1).map(|s| s.parse().unwrap()).unwrap_or(3);
    let depth: usize = std::env::args().nth(2).map(|s| s.parse().unwrap()).unwrap_or(3);
    let t = std::time::Instant::now();
    let dom = DomainSpec::symbolic(n, 3).unwrap();
    let ch = bergman_chain(&dom, depth, std::env::args().nth(3).map(|s| s.parse().unwrap()).unwrap_or(depth as u32)).unwrap();
    for (name, s) in [("k", &ch.k), ("s", &ch.lambda.symbol), ("p", &ch.p.symbol)] {
        for j in 0..=depth {
            println!("{name}[{j}] = {:?}", center_profile(s, j).unwrap().iter().map(|(k, v)| format!("{k:?}: {v}")).collect::<Vec<_>>());
        }
    }
    for j in 0..=depth {
        println!("g[{j}] = {:?}", center_profile(&ch.g, j).unwrap().iter().map(|(k, v)| format!("{k:?}: {v}")).collect::<Vec<_>>());
    }
    eprintln!("elapsed {:?}, terms k={} g={}", t.elapsed(), ch.k.term_count(), ch.g.term_count());
}
