use crate::error::KbError;
use crate::schedule::RampSchedule;
use mq_core::C64;
use ndarray::Array2;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

/// (LL, LR) component pair; RR = LL and RL = -LR by construction. Products
/// of the 2×2 L/R matrices reduce to the complex-pair rule implemented by
/// `mul`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GPair {
    pub ll: C64,
    pub lr: C64,
}

impl GPair {
    pub const ZERO: GPair = GPair { ll: C64::new(0.0, 0.0), lr: C64::new(0.0, 0.0) };

    #[inline(always)]
    pub fn mul(self, other: GPair) -> GPair {
        GPair {
            ll: self.ll * other.ll - self.lr * other.lr,
            lr: self.ll * other.lr + self.lr * other.ll,
        }
    }

    #[inline(always)]
    pub fn cube_elementwise(self) -> GPair {
        GPair { ll: self.ll * self.ll * self.ll, lr: self.lr * self.lr * self.lr }
    }

    #[inline(always)]
    pub fn add(self, other: GPair) -> GPair {
        GPair { ll: self.ll + other.ll, lr: self.lr + other.lr }
    }

    #[inline(always)]
    pub fn sub(self, other: GPair) -> GPair {
        GPair { ll: self.ll - other.ll, lr: self.lr - other.lr }
    }

    #[inline(always)]
    pub fn scale(self, s: C64) -> GPair {
        GPair { ll: s * self.ll, lr: s * self.lr }
    }
}

/// Causal two-time Wightman state on [-t_init, T_max]².
///
/// Axis index i maps to time t(i) = (i - n_init)·dt; the filled square is
/// [0, filled]². Unfilled entries are NaN so that any causality violation
/// contaminates visibly. Direct and transposed copies of each component are
/// kept in sync (the history integrals walk both rows and columns).
pub struct TwoTimeGrid {
    pub dt: f64,
    pub n_init: usize,
    pub n_total: usize,
    pub filled: usize,
    pub ll: Array2<C64>,
    pub lr: Array2<C64>,
    pub ll_t: Array2<C64>,
    pub lr_t: Array2<C64>,
    pub schedule: RampSchedule,
    /// Initial-window decay ratio recorded by the initializer.
    pub init_decay: f64,
    pub beta_init: f64,
    pub mu_init: f64,
    pub j_coupling: f64,
}

impl TwoTimeGrid {
    pub fn time(&self, i: usize) -> f64 {
        (i as f64 - self.n_init as f64) * self.dt
    }

    pub fn t_init(&self) -> f64 {
        self.n_init as f64 * self.dt
    }

    pub fn t_max(&self) -> f64 {
        self.time(self.n_total - 1)
    }

    /// Index of t = 0 on either axis.
    pub fn zero_index(&self) -> usize {
        self.n_init
    }

    #[inline(always)]
    pub fn greater(&self, i: usize, j: usize) -> GPair {
        GPair { ll: self.ll[(i, j)], lr: self.lr[(i, j)] }
    }

    #[inline(always)]
    pub fn set(&mut self, i: usize, j: usize, g: GPair) {
        self.ll[(i, j)] = g.ll;
        self.lr[(i, j)] = g.lr;
        self.ll_t[(j, i)] = g.ll;
        self.lr_t[(j, i)] = g.lr;
    }

    /// Largest deviation of the equal-time LL component from the canonical
    /// -i/2 over the filled diagonal.
    pub fn canonical_violation(&self) -> f64 {
        (0..=self.filled)
            .map(|i| (self.ll[(i, i)] - C64::new(0.0, -0.5)).norm())
            .fold(0.0, f64::max)
    }

    /// Any NaN inside the filled square?
    pub fn filled_region_has_nan(&self) -> bool {
        for i in 0..=self.filled {
            for j in 0..=self.filled {
                if self.ll[(i, j)].re.is_nan()
                    || self.ll[(i, j)].im.is_nan()
                    || self.lr[(i, j)].re.is_nan()
                    || self.lr[(i, j)].im.is_nan()
                {
                    return true;
                }
            }
        }
        false
    }

    /// Binary checkpoint: ASCII header, then row-major little-endian
    /// (re, im) f64 pairs for the four components LL, LR, RL, RR over the
    /// full square.
    pub fn write_checkpoint<P: AsRef<Path>>(&self, path: P) -> Result<(), KbError> {
        let f = std::fs::File::create(path)?;
        let mut w = BufWriter::new(f);
        writeln!(w, "MQKB 1")?;
        writeln!(
            w,
            "dt={} t_init={} t_max={} M={} filled={} beta={} mu_i={} j={}",
            self.dt,
            self.t_init(),
            self.t_max(),
            self.n_total,
            self.filled,
            self.beta_init,
            self.mu_init,
            self.j_coupling
        )?;
        writeln!(w, "schedule={}", self.schedule.descriptor())?;
        writeln!(w, "components=LL,LR,RL,RR layout=row-major endian=little")?;
        let mut dump = |arr: &Array2<C64>, sign: f64| -> Result<(), KbError> {
            for v in arr.iter() {
                w.write_all(&(sign * v.re).to_le_bytes())?;
                w.write_all(&(sign * v.im).to_le_bytes())?;
            }
            Ok(())
        };
        dump(&self.ll, 1.0)?;
        dump(&self.lr, 1.0)?;
        dump(&self.lr, -1.0)?; // RL = -LR
        dump(&self.ll, 1.0)?; // RR = LL
        Ok(())
    }

    pub fn read_checkpoint<P: AsRef<Path>>(path: P) -> Result<Self, KbError> {
        let f = std::fs::File::open(path)?;
        let mut r = BufReader::new(f);
        let mut line = String::new();
        r.read_line(&mut line)?;
        if line.trim() != "MQKB 1" {
            return Err(KbError::Checkpoint(format!("bad magic line {line:?}")));
        }
        line.clear();
        r.read_line(&mut line)?;
        let mut dt = None;
        let mut n_total = None;
        let mut filled = None;
        let mut t_init = None;
        let mut beta = 0.0;
        let mut mu_i = 0.0;
        let mut j = 1.0;
        for kv in line.trim().split_whitespace() {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| KbError::Checkpoint(format!("bad header field {kv:?}")))?;
            let parse = |v: &str| {
                v.parse::<f64>()
                    .map_err(|e| KbError::Checkpoint(format!("bad number {v:?}: {e}")))
            };
            match k {
                "dt" => dt = Some(parse(v)?),
                "t_init" => t_init = Some(parse(v)?),
                "M" => n_total = Some(parse(v)? as usize),
                "filled" => filled = Some(parse(v)? as usize),
                "beta" => beta = parse(v)?,
                "mu_i" => mu_i = parse(v)?,
                "j" => j = parse(v)?,
                _ => {}
            }
        }
        let dt = dt.ok_or_else(|| KbError::Checkpoint("missing dt".into()))?;
        let n_total = n_total.ok_or_else(|| KbError::Checkpoint("missing M".into()))?;
        let filled = filled.ok_or_else(|| KbError::Checkpoint("missing filled".into()))?;
        let t_init = t_init.ok_or_else(|| KbError::Checkpoint("missing t_init".into()))?;
        let n_init = (t_init / dt).round() as usize;

        line.clear();
        r.read_line(&mut line)?;
        let schedule: RampSchedule = line
            .trim()
            .strip_prefix("schedule=")
            .and_then(|s| serde_json::from_str(s).ok())
            .ok_or_else(|| KbError::Checkpoint("bad schedule line".into()))?;
        line.clear();
        r.read_line(&mut line)?; // components line

        let mut load = |n: usize| -> Result<Array2<C64>, KbError> {
            let mut buf = vec![0u8; n * n * 16];
            r.read_exact(&mut buf)?;
            let data: Vec<C64> = buf
                .chunks_exact(16)
                .map(|c| {
                    C64::new(
                        f64::from_le_bytes(c[0..8].try_into().unwrap()),
                        f64::from_le_bytes(c[8..16].try_into().unwrap()),
                    )
                })
                .collect();
            Array2::from_shape_vec((n, n), data)
                .map_err(|e| KbError::Checkpoint(format!("shape: {e}")))
        };
        let ll = load(n_total)?;
        let lr = load(n_total)?;
        let _rl = load(n_total)?;
        let _rr = load(n_total)?;
        let ll_t = ll.t().to_owned();
        let lr_t = lr.t().to_owned();
        Ok(Self {
            dt,
            n_init,
            n_total,
            filled,
            ll,
            lr,
            ll_t,
            lr_t,
            schedule,
            init_decay: f64::NAN,
            beta_init: beta,
            mu_init: mu_i,
            j_coupling: j,
        })
    }
}
