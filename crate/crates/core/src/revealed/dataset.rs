use std::io::{Read, Write};
use std::path::Path;

use crate::{Error, Result};

/// Paired probe/response observations, one pair per epoch.
///
/// Probes are strictly positive, responses nonnegative, and every vector
/// shares the same dimension `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResponseDataset {
    probes: Vec<Vec<f64>>,
    responses: Vec<Vec<f64>>,
}

impl ProbeResponseDataset {
    pub fn new(probes: Vec<Vec<f64>>, responses: Vec<Vec<f64>>) -> Result<Self> {
        if probes.is_empty() {
            return Err(Error::InvalidInput("dataset needs at least one epoch".into()));
        }
        if probes.len() != responses.len() {
            return Err(Error::Dimension(format!(
                "{} probes but {} responses",
                probes.len(),
                responses.len()
            )));
        }
        let m = probes[0].len();
        if m == 0 {
            return Err(Error::Dimension("vectors must have at least one entry".into()));
        }
        for (t, (a, b)) in probes.iter().zip(&responses).enumerate() {
            if a.len() != m || b.len() != m {
                return Err(Error::Dimension(format!(
                    "epoch {t}: expected dimension {m}, got probe {} and response {}",
                    a.len(),
                    b.len()
                )));
            }
            if let Some(x) = a.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
                return Err(Error::InvalidInput(format!("epoch {t}: probe entry {x} is not positive")));
            }
            if let Some(x) = b.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
                return Err(Error::InvalidInput(format!(
                    "epoch {t}: response entry {x} is negative"
                )));
            }
        }
        Ok(Self { probes, responses })
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.probes[0].len()
    }

    pub fn probe(&self, t: usize) -> &[f64] {
        &self.probes[t]
    }

    pub fn response(&self, t: usize) -> &[f64] {
        &self.responses[t]
    }

    pub fn probes(&self) -> &[Vec<f64>] {
        &self.probes
    }

    pub fn responses(&self) -> &[Vec<f64>] {
        &self.responses
    }

    /// Multiply every probe by `k > 0`.
    pub fn with_scaled_probes(&self, k: f64) -> Result<Self> {
        let probes = self
            .probes
            .iter()
            .map(|a| a.iter().map(|x| x * k).collect())
            .collect();
        Self::new(probes, self.responses.clone())
    }

    /// Write `epoch,alpha_1..alpha_m,beta_1..beta_m` with 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let m = self.dim();
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["epoch".to_string()];
        header.extend((1..=m).map(|i| format!("alpha_{i}")));
        header.extend((1..=m).map(|i| format!("beta_{i}")));
        w.write_record(&header)?;
        for (t, (a, b)) in self.probes.iter().zip(&self.responses).enumerate() {
            let mut row = vec![(t + 1).to_string()];
            row.extend(a.iter().chain(b).map(|x| format_f64(*x)));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ascii")
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers()?.clone();
        let cols = header.len();
        if cols < 3 || cols % 2 == 0 || &header[0] != "epoch" {
            return Err(Error::Parse {
                line: 1,
                msg: "expected header epoch,alpha_1..alpha_m,beta_1..beta_m".into(),
            });
        }
        let m = (cols - 1) / 2;
        for i in 0..m {
            if header[1 + i] != format!("alpha_{}", i + 1) || header[1 + m + i] != format!("beta_{}", i + 1)
            {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("unexpected column names around index {}", i + 1),
                });
            }
        }
        let mut probes = Vec::new();
        let mut responses = Vec::new();
        for (k, rec) in r.records().enumerate() {
            let rec = rec?;
            let line = k + 2;
            let parse = |i: usize| -> Result<f64> {
                rec[i].trim().parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    msg: format!("column {}: {e}", i + 1),
                })
            };
            let epoch: usize = rec[0].trim().parse().map_err(|e| Error::Parse {
                line,
                msg: format!("epoch: {e}"),
            })?;
            if epoch != k + 1 {
                return Err(Error::Parse { line, msg: format!("expected epoch {}, found {epoch}", k + 1) });
            }
            probes.push((1..=m).map(parse).collect::<Result<Vec<_>>>()?);
            responses.push((m + 1..=2 * m).map(parse).collect::<Result<Vec<_>>>()?);
        }
        Self::new(probes, responses)
    }

    pub fn read_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

/// Scientific notation with 17 significant digits; parses back to the same bits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_probe_and_negative_response() {
        assert!(ProbeResponseDataset::new(vec![vec![0.0, 1.0]], vec![vec![1.0, 1.0]]).is_err());
        assert!(ProbeResponseDataset::new(vec![vec![1.0, 1.0]], vec![vec![-1e-3, 1.0]]).is_err());
        assert!(ProbeResponseDataset::new(vec![vec![1.0]], vec![vec![1.0, 2.0]]).is_err());
        assert!(ProbeResponseDataset::new(vec![], vec![]).is_err());
    }

    #[test]
    fn csv_layout() {
        let d = ProbeResponseDataset::new(vec![vec![0.5, 0.25]], vec![vec![1.0, 2.0]]).unwrap();
        let s = d.to_csv_string();
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("epoch,alpha_1,alpha_2,beta_1,beta_2"));
        assert!(lines.next().unwrap().starts_with("1,5.0000000000000000e-1,"));
    }

    #[test]
    fn csv_reader_reports_line_numbers() {
        let text = "epoch,alpha_1,beta_1\n1,1.0,2.0\n2,oops,1.0\n";
        match ProbeResponseDataset::read_csv(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }
}
