//! The partial sums `Σ_{j ≤ k} y^j x y^j` lie in the ideal generated by `x`
//! at every truncation degree, but their certificates grow without bound:
//! the infinite sum needs the completion, which no finite degree can see.

use ncseries::ideal::CompletedIdealBasis;
use ncseries::{NCSeries, Scalar, Word};

fn main() {
    println!("{:>3} {:>6} {:>12}", "D", "dim", "certificate");
    for d in (3..=11).step_by(2) {
        let terms = (1..=(d - 1) / 2).map(|j| {
            let mut w = vec![2; j];
            w.push(1);
            w.extend(vec![2; j]);
            (Word::new(w), Scalar::from_int(1))
        });
        let f = NCSeries::from_terms(2, d, terms).unwrap();
        let ideal = CompletedIdealBasis::build(&[NCSeries::variable(2, d, 1).unwrap()], 2, d).unwrap();
        let m = ideal.member_of(&f).unwrap();
        let size = m.certificate.map_or(0, |c| c.terms.len());
        println!("{d:>3} {:>6} {size:>12}", ideal.dim());
    }
}
