//! Regenerates `data/synthetic7.csv`.
fn main() {
    print!("{}", aggpredict::synthetic::carbonate_samples(7, 2023).to_csv());
}
