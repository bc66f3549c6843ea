//! Observables CSV and binary state dumps.

use std::io::{self, Read, Write};

use tevo_core::{number_expectations, Basis, Complex64, ExampleParams, StateVector};

pub const DUMP_MAGIC: &[u8; 4] = b"TEV1";

/// `t,n_0,m_0,n_1..n_K,np_1..np_K1,N0_sum,Nm_sum,norm`.
pub fn csv_header(p: &ExampleParams) -> String {
    let mut cols = vec!["t".to_string(), "n_0".into(), "m_0".into()];
    cols.extend((1..=p.k).map(|k| format!("n_{k}")));
    cols.extend((1..=p.k1).map(|k| format!("np_{k}")));
    cols.extend(["N0_sum".into(), "Nm_sum".into(), "norm".into()]);
    cols.join(",")
}

/// 17 significant digits, enough to round-trip any binary64.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// One CSV row of observables at time `t`.
pub fn csv_row(t: f64, v: &StateVector, basis: &Basis) -> tevo_core::Result<String> {
    let obs = number_expectations(v, basis)?;
    let mut fields = Vec::with_capacity(obs.per_mode.len() + 4);
    fields.push(fmt(t));
    fields.extend(obs.per_mode.iter().map(|&x| fmt(x)));
    fields.extend(obs.sector_sums.iter().map(|&x| fmt(x)));
    fields.push(fmt(v.norm2()));
    Ok(fields.join(","))
}

/// `TEV1`, dimension as little-endian `u64`, then `(re, im)` pairs as
/// little-endian `f64`.
pub fn write_state_dump<W: Write>(mut w: W, v: &StateVector) -> io::Result<()> {
    w.write_all(DUMP_MAGIC)?;
    w.write_all(&(v.dim() as u64).to_le_bytes())?;
    for z in v.iter() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    w.flush()
}

pub fn read_state_dump<R: Read>(mut r: R) -> io::Result<StateVector> {
    let invalid = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != DUMP_MAGIC {
        return Err(invalid("not a TEV1 state dump"));
    }
    let mut word = [0u8; 8];
    r.read_exact(&mut word)?;
    let dim =
        usize::try_from(u64::from_le_bytes(word)).map_err(|_| invalid("dimension too large"))?;
    let mut out = Vec::new();
    for _ in 0..dim {
        r.read_exact(&mut word)?;
        let re = f64::from_le_bytes(word);
        r.read_exact(&mut word)?;
        out.push(Complex64::new(re, f64::from_le_bytes(word)));
    }
    if r.read(&mut [0u8; 1])? != 0 {
        return Err(invalid("trailing bytes after state"));
    }
    Ok(out.into())
}
