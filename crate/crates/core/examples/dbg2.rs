use num_complex::Complex64;
use oscsie_core::RationalSeries;
fn c(re: f64, im: f64) -> Complex64 { Complex64::new(re, im) }
fn main() {
    let s = RationalSeries::from_terms(1.0, [(1, c(1.0,0.0)), (-1, c(1.0,0.0))]).unwrap();
    // manual tan-substitution Simpson at fine fixed resolution
    let n = 2_000_001usize;
    let h = std::f64::consts::PI / (n as f64 - 1.0);
    let mut acc = c(0.0,0.0);
    for k in 0..n {
        let theta = -std::f64::consts::FRAC_PI_2 + k as f64 * h;
        let t = theta.tan();
        let v = s.eval(c(t, 0.0)).unwrap() * (1.0 + t*t);
        let w = if k == 0 || k == n-1 { 0.5 } else { 1.0 };
        acc += v * w * h;
    }
    println!("trapz oracle {acc}");
    println!("pv formula  {}", s.pv_integral());
    let g = |theta: f64| { let t = theta.tan(); s.eval(c(t,0.0)).unwrap()*(1.0+t*t) };
    for &th in &[-std::f64::consts::FRAC_PI_2, -1.5707963, 0.0, 1.5707963, std::f64::consts::FRAC_PI_2] {
        println!("g({th}) = {}", g(th));
    }
}
