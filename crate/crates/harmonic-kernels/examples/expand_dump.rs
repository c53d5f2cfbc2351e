use harmonic_kernels::kernel_transform::*;
use harmonic_kernels::symbol_algebra::DomainSpec;

fn main() {
    let n: usize = std::env::args().nth(1).map(|s| s.parse().unwrap()).unwrap_or(3);
    let dom = DomainSpec::symbolic(n, 3).unwrap();
    println!("K: {}", poisson_kernel_expansion(&dom, 3).unwrap());
    println!("H: {}", bergman_kernel_expansion(&dom, 3).unwrap());
    println!("trace: {}", lambda_inverse_trace_expansion(&dom, 3).unwrap());
}
