//! Shared machinery for the subcommands: algorithm dispatch, seeded input
//! generation, records, and CSV/JSON emission.

use countfft::complex::{max_rel_err, ComplexPair};
use countfft::counting::{with_tally, OpTally};
use countfft::fft::{dft_naive, fft_sr, msr, whufft, ScaledVariant};
use countfft::hprime::{apply_hprime, hprime_matrix, WhtImpl, MATRIX_ORACLE_MAX};
use countfft::predict::{predict, PredAlgo, PredictionValue};
use countfft::rng::SplitMix64;
use countfft::wht::{wht_folklore, wht_h4, wht_h8, wht_naive};
use countfft::Error;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Algo {
    WhtNaive,
    WhtFolklore,
    WhtH4,
    WhtH8,
    Hprime,
    FftNaive,
    FftSr,
    FftMsr,
    FftWhufft,
}

impl Algo {
    pub fn id(self) -> &'static str {
        match self {
            Algo::WhtNaive => "wht-naive",
            Algo::WhtFolklore => "wht-folklore",
            Algo::WhtH4 => "wht-h4",
            Algo::WhtH8 => "wht-h8",
            Algo::Hprime => "hprime",
            Algo::FftNaive => "fft-naive",
            Algo::FftSr => "fft-sr",
            Algo::FftMsr => "fft-msr",
            Algo::FftWhufft => "fft-whufft",
        }
    }

    pub fn is_wht(self) -> bool {
        matches!(self, Algo::WhtNaive | Algo::WhtFolklore | Algo::WhtH4 | Algo::WhtH8)
    }

    /// Quadratic-time algorithms are capped at 2^12 when run directly.
    pub fn is_quadratic(self) -> bool {
        matches!(self, Algo::WhtNaive | Algo::FftNaive)
    }

    pub fn run(self, x: &[ComplexPair]) -> Result<Vec<ComplexPair>, Error> {
        match self {
            // The WHTs are field transforms: purely real input runs (and is
            // charged) over the reals; otherwise componentwise over pairs.
            Algo::WhtNaive => run_wht(x, wht_naive, wht_naive),
            Algo::WhtFolklore => run_wht(x, wht_folklore, wht_folklore),
            Algo::WhtH4 => run_wht(x, |v| wht_h4(v, 0), |v| wht_h4(v, 0)),
            Algo::WhtH8 => run_wht(x, |v| wht_h8(v, 0), |v| wht_h8(v, 0)),
            Algo::Hprime => apply_hprime(x, WhtImpl::H8),
            Algo::FftNaive => dft_naive(x),
            Algo::FftSr => fft_sr(x),
            Algo::FftMsr => msr(x, ScaledVariant::Plain),
            Algo::FftWhufft => whufft(x),
        }
    }

    /// The brute-force reference for `verify`.
    pub fn oracle(self, x: &[ComplexPair]) -> Result<Vec<ComplexPair>, Error> {
        match self {
            _ if self.is_wht() => run_wht(x, wht_naive, wht_naive),
            Algo::Hprime => {
                let n = x.len();
                if n > MATRIX_ORACLE_MAX {
                    return Err(Error::TooLarge {
                        what: "H' matrix oracle size",
                        requested: n as u64,
                        max: MATRIX_ORACLE_MAX as u64,
                    });
                }
                let m = hprime_matrix(n)?;
                Ok((0..n)
                    .map(|r| {
                        let (mut re, mut im) = (0.0, 0.0);
                        for (c, v) in x.iter().enumerate() {
                            let s = f64::from(m[r][c]);
                            let (vr, vi) = v.values();
                            re += s * vr;
                            im += s * vi;
                        }
                        ComplexPair::new(re, im)
                    })
                    .collect())
            }
            _ => dft_naive(x),
        }
    }

    pub fn predictor(self) -> Option<PredAlgo> {
        match self {
            Algo::WhtFolklore => Some(PredAlgo::Folklore),
            Algo::WhtH4 => Some(PredAlgo::H4),
            Algo::WhtH8 => Some(PredAlgo::H8),
            Algo::Hprime => Some(PredAlgo::HprimeExact),
            Algo::FftSr => Some(PredAlgo::Sr),
            Algo::FftMsr => Some(PredAlgo::Msr),
            Algo::FftWhufft => Some(PredAlgo::Whufft),
            Algo::WhtNaive | Algo::FftNaive => None,
        }
    }

    /// Default verification tolerance: tighter for the add-only transforms.
    pub fn default_tol(self) -> f64 {
        if self.is_wht() {
            1e-12
        } else {
            1e-10
        }
    }
}

fn run_wht(
    x: &[ComplexPair],
    real: impl Fn(&[countfft::counting::CountedScalar]) -> Result<Vec<countfft::counting::CountedScalar>, Error>,
    complex: impl Fn(&[ComplexPair]) -> Result<Vec<ComplexPair>, Error>,
) -> Result<Vec<ComplexPair>, Error> {
    if x.iter().all(|v| v.values().1 == 0.0) {
        let reals: Vec<_> = x.iter().map(|v| v.re).collect();
        Ok(real(&reals)?
            .into_iter()
            .map(|r| ComplexPair { re: r, im: countfft::counting::CountedScalar::new(0.0) })
            .collect())
    } else {
        complex(x)
    }
}

/// Seeded input for one (algo, size, trial) cell. WHT inputs are real-valued;
/// the DFT and H' inputs get random imaginary parts too.
pub fn gen_input(algo: Algo, log2n: u32, trial: u32, seed: u64, integer: bool) -> Vec<ComplexPair> {
    let label = format!("{}:{}:{}", algo.id(), log2n, trial);
    let mut rng = SplitMix64::derive(seed, &label);
    let n = 1usize << log2n;
    let complex = !algo.is_wht();
    (0..n)
        .map(|_| {
            let re = if integer {
                rng.next_small_int(8)
            } else {
                rng.next_signed_unit()
            };
            let im = if !complex {
                0.0
            } else if integer {
                rng.next_small_int(8)
            } else {
                rng.next_signed_unit()
            };
            ComplexPair::new(re, im)
        })
        .collect()
}

/// One measurement row, as emitted to CSV/JSON.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub algo: String,
    pub log2n: u32,
    pub add_sub: u64,
    pub mul: u64,
    pub div2: u64,
    pub mul_pow2: u64,
    pub total: u64,
    pub predicted_total: Option<f64>,
    pub predicted_kind: Option<String>,
    pub max_rel_err: Option<f64>,
    pub seed: u64,
}

impl BenchRecord {
    pub fn measure(
        algo: Algo,
        log2n: u32,
        x: &[ComplexPair],
        max_rel_err: Option<f64>,
        seed: u64,
    ) -> Result<BenchRecord, Error> {
        let (res, tally) = with_tally(|| algo.run(x));
        res?;
        Ok(BenchRecord::from_tally(algo, log2n, tally, max_rel_err, seed))
    }

    pub fn from_tally(
        algo: Algo,
        log2n: u32,
        tally: OpTally,
        max_rel_err: Option<f64>,
        seed: u64,
    ) -> BenchRecord {
        let prediction = algo.predictor().map(|p| predict(p, log2n).expect("in range"));
        let (predicted_total, predicted_kind) = match prediction {
            Some(p) => {
                let total = match p.value {
                    PredictionValue::Tally(t) => t.total() as f64,
                    PredictionValue::Total(r) => r.to_f64(),
                };
                (Some(total), Some(p.kind.id().to_string()))
            }
            None => (None, None),
        };
        BenchRecord {
            algo: algo.id().to_string(),
            log2n,
            add_sub: tally.add_sub,
            mul: tally.mul,
            div2: tally.div2,
            mul_pow2: tally.mul_pow2,
            total: tally.total(),
            predicted_total,
            predicted_kind,
            max_rel_err,
            seed,
        }
    }
}

pub const CSV_HEADER: &str =
    "algo,log2n,add_sub,mul,div2,mul_pow2,total,predicted_total,predicted_kind,max_rel_err,seed";

pub fn records_to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let pt = r.predicted_total.map(|v| v.to_string()).unwrap_or_default();
        let pk = r.predicted_kind.clone().unwrap_or_default();
        let err = r.max_rel_err.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.algo, r.log2n, r.add_sub, r.mul, r.div2, r.mul_pow2, r.total, pt, pk, err, r.seed
        ));
    }
    out
}

#[derive(Serialize)]
struct JsonReport<'a, T: Serialize> {
    prng: &'static str,
    records: &'a [T],
}

pub fn records_to_json<T: Serialize>(records: &[T]) -> String {
    serde_json::to_string_pretty(&JsonReport {
        prng: countfft::rng::PRNG_ID,
        records,
    })
    .expect("serializable")
    + "\n"
}

/// Relative error of a run against the designated oracle.
pub fn verify_one(algo: Algo, x: &[ComplexPair]) -> Result<f64, Error> {
    let got = algo.run(x)?;
    let want = algo.oracle(x)?;
    Ok(max_rel_err(&got, &want))
}
