//! Chain CSV: a `#`-prefixed JSON header with the sampler bookkeeping, then
//! `iteration,phi,mu,alpha` rows in 17-significant-digit scientific notation.

use std::io::{BufRead, Write};

use ggbayes::{Chain, McmcConfig, Params};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ChainIoError {
    #[error("chain file is missing its '#' header line")]
    MissingHeader,
    #[error("bad chain header: {0}")]
    Header(#[from] serde_json::Error),
    #[error("chain csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("chain row {row}: {detail}")]
    Row { row: usize, detail: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Serialize, Deserialize)]
struct Header {
    config: McmcConfig,
    /// `None` when the move was switched off (held-fixed parameter).
    acceptance_alpha: Option<f64>,
    acceptance_phi: Option<f64>,
    tuned_sd_log_alpha: f64,
    tuned_sd_log_phi: f64,
    draws: usize,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_chain<W: Write>(mut w: W, chain: &Chain) -> Result<(), ChainIoError> {
    let header = Header {
        config: chain.config.clone(),
        acceptance_alpha: finite(chain.acceptance_alpha),
        acceptance_phi: finite(chain.acceptance_phi),
        tuned_sd_log_alpha: chain.tuned_sd_log_alpha,
        tuned_sd_log_phi: chain.tuned_sd_log_phi,
        draws: chain.len(),
    };
    writeln!(w, "# {}", serde_json::to_string(&header)?)?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["iteration", "phi", "mu", "alpha"])?;
    let cfg = &chain.config;
    for (i, p) in chain.draws.iter().enumerate() {
        let it = cfg.burn_in + (i + 1) * cfg.thin;
        out.write_record([it.to_string(), fmt17(p.phi()), fmt17(p.mu()), fmt17(p.alpha())])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_chain<R: BufRead>(mut r: R) -> Result<Chain, ChainIoError> {
    let mut first = String::new();
    r.read_line(&mut first)?;
    let json = first.trim_end().strip_prefix('#').ok_or(ChainIoError::MissingHeader)?;
    let header: Header = serde_json::from_str(json.trim())?;
    let mut rows = csv::Reader::from_reader(r);
    let mut draws = Vec::with_capacity(header.draws);
    for (i, rec) in rows.records().enumerate() {
        let rec = rec?;
        let field = |k: usize| -> Result<f64, ChainIoError> {
            rec.get(k)
                .ok_or_else(|| ChainIoError::Row {
                    row: i + 1,
                    detail: format!("missing column {k}"),
                })?
                .parse()
                .map_err(|e| ChainIoError::Row {
                    row: i + 1,
                    detail: format!("{e}"),
                })
        };
        let p = Params::new(field(1)?, field(2)?, field(3)?).map_err(|e| ChainIoError::Row {
            row: i + 1,
            detail: e.to_string(),
        })?;
        draws.push(p);
    }
    if draws.len() != header.draws {
        return Err(ChainIoError::Row {
            row: draws.len(),
            detail: format!("header promises {} draws", header.draws),
        });
    }
    Ok(Chain {
        draws,
        acceptance_alpha: header.acceptance_alpha.unwrap_or(f64::NAN),
        acceptance_phi: header.acceptance_phi.unwrap_or(f64::NAN),
        tuned_sd_log_alpha: header.tuned_sd_log_alpha,
        tuned_sd_log_phi: header.tuned_sd_log_phi,
        config: header.config,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ggbayes::{load_dataset, run_chain, Init};

    #[test]
    fn round_trip_is_exact() {
        let data = load_dataset("meeker").unwrap();
        let cfg = McmcConfig {
            iterations: 4_000,
            burn_in: 1_000,
            thin: 10,
            ..McmcConfig::with_seed(9)
        };
        let chain = run_chain(&data, &cfg, Init::Auto).unwrap();
        let mut buf = Vec::new();
        write_chain(&mut buf, &chain).unwrap();
        let back = read_chain(buf.as_slice()).unwrap();
        assert_eq!(back, chain);
    }

    #[test]
    fn rejects_headerless_file() {
        let r = read_chain("iteration,phi,mu,alpha\n1,1,1,1\n".as_bytes());
        assert!(matches!(r, Err(ChainIoError::MissingHeader)));
    }

    #[test]
    fn seventeen_digits() {
        let x = 0.1 + 0.2;
        assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
        assert_eq!(fmt17(1.0), "1.0000000000000000e0");
    }
}
