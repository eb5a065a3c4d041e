use crate::WgError;

/// Fourth moment of Haar matrix elements,
/// `E[U_{r1 c1} U*_{r2 c2} U_{r3 c3} U*_{r4 c4}]`, passed as the tuple
/// `(r1, c1, r2, c2, r3, c3, r4, c4)`:
///
/// ```text
///   ( d[r1=r2] d[c1=c2] d[r3=r4] d[c3=c4]
///   + d[r1=r4] d[c1=c4] d[r2=r3] d[c2=c3] ) / (N^2 - 1)
/// - ( d[r1=r2] d[c1=c4] d[r3=r4] d[c2=c3]
///   + d[r1=r4] d[c1=c2] d[r2=r3] d[c3=c4] ) / (N (N^2 - 1))
/// ```
pub fn haar_fourth_moment(n: usize, idx: [usize; 8]) -> Result<f64, WgError> {
    if n < 2 {
        return Err(WgError::InvalidArgument(format!(
            "moment formula needs dimension >= 2, got {n}"
        )));
    }
    if idx.iter().any(|&i| i >= n) {
        return Err(WgError::InvalidArgument("index out of range".into()));
    }
    let [r1, c1, r2, c2, r3, c3, r4, c4] = idx;
    let d = |a: usize, b: usize| -> f64 { (a == b) as u8 as f64 };
    let nf = n as f64;
    let plus = d(r1, r2) * d(c1, c2) * d(r3, r4) * d(c3, c4)
        + d(r1, r4) * d(c1, c4) * d(r2, r3) * d(c2, c3);
    let minus = d(r1, r2) * d(c1, c4) * d(r3, r4) * d(c2, c3)
        + d(r1, r4) * d(c1, c2) * d(r2, r3) * d(c3, c4);
    Ok((plus - minus / nf) / (nf * nf - 1.0))
}
