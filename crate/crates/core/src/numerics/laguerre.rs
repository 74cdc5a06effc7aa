/// Generalized Laguerre polynomial L_n^{(a)}(z) by the three-term recurrence
/// (k+1) L_{k+1} = (2k + 1 + a − z) L_k − (k + a) L_{k−1}.
pub fn laguerre(n: usize, a: f64, z: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + a - z;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - z) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}
