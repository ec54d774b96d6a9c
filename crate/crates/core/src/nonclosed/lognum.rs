use std::cmp::Ordering;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::hireal::HiReal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    fn mul(self, o: Sign) -> Sign {
        match (self, o) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Pos,
            _ => Sign::Neg,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Sign::Neg => "-",
            Sign::Zero => "0",
            Sign::Pos => "+",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Round to nearest; no bound guarantee.
    Nearest,
    /// Every result's magnitude dominates the true magnitude.
    UpperBound,
}

/// A real number `sign · exp(log_mag)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogNum {
    sign: Sign,
    log_mag: HiReal,
    mode: Mode,
}

/// Logarithmic gap beyond which `ln(1 + e^{-gap})` is below the absolute
/// slack floor and is skipped.
const NEGLIGIBLE_GAP: i64 = 512;

/// Upward rounding applied to a log magnitude: `max(|x|·2^-40, 2^-100)`.
pub fn slack(log_mag: &HiReal) -> HiReal {
    log_mag.abs().mul_pow2(-40).max(HiReal::pow2(-100))
}

impl LogNum {
    pub fn zero(mode: Mode) -> Self {
        LogNum { sign: Sign::Zero, log_mag: HiReal::zero(), mode }
    }

    /// `sign · exp(log_mag)`, rounded up when `mode` is [`Mode::UpperBound`].
    pub fn from_log(sign: Sign, log_mag: HiReal, mode: Mode) -> Self {
        if sign == Sign::Zero {
            return Self::zero(mode);
        }
        LogNum { sign, log_mag, mode }.rounded()
    }

    pub fn from_f64(v: f64, mode: Mode) -> Self {
        if v == 0.0 {
            return Self::zero(mode);
        }
        let sign = if v < 0.0 { Sign::Neg } else { Sign::Pos };
        Self::from_log(sign, HiReal::from_f64(v.abs()).ln(), mode)
    }

    pub fn from_hireal(v: &HiReal, mode: Mode) -> Self {
        if v.is_zero() {
            return Self::zero(mode);
        }
        let sign = if v.is_negative() { Sign::Neg } else { Sign::Pos };
        Self::from_log(sign, v.abs().ln(), mode)
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// `ln |value|`; meaningless for zero.
    pub fn log_mag(&self) -> &HiReal {
        &self.log_mag
    }

    pub fn log10_mag(&self) -> HiReal {
        self.log_mag.div(&HiReal::ln_10())
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    /// `|value| < 1`.
    pub fn below_one(&self) -> bool {
        self.is_zero() || self.log_mag.is_negative()
    }

    /// The value as an `f64`, for moderate magnitudes.
    pub fn to_f64(&self) -> f64 {
        let m = self.log_mag.exp().to_f64();
        match self.sign {
            Sign::Zero => 0.0,
            Sign::Pos => m,
            Sign::Neg => -m,
        }
    }

    fn rounded(mut self) -> Self {
        if self.mode == Mode::UpperBound && self.sign != Sign::Zero {
            self.log_mag = self.log_mag.add(&slack(&self.log_mag));
        }
        self
    }

    fn joint_mode(a: &LogNum, b: &LogNum) -> Mode {
        if a.mode == Mode::UpperBound || b.mode == Mode::UpperBound {
            Mode::UpperBound
        } else {
            Mode::Nearest
        }
    }
}

/// `a · b`: logs add.
pub fn log_mul(a: &LogNum, b: &LogNum) -> LogNum {
    let mode = LogNum::joint_mode(a, b);
    let sign = a.sign.mul(b.sign);
    if sign == Sign::Zero {
        return LogNum::zero(mode);
    }
    LogNum::from_log(sign, a.log_mag.add(&b.log_mag), mode)
}

/// `a + b` by log-sum-exp.
///
/// In upper-bound mode the magnitudes are added (`|a| + |b|` dominates any
/// signed sum) and the result carries the sign of the larger operand.
pub fn log_add(a: &LogNum, b: &LogNum) -> LogNum {
    let mode = LogNum::joint_mode(a, b);
    let (big, small) = match (a.is_zero(), b.is_zero()) {
        (true, true) => return LogNum::zero(mode),
        (true, false) => return LogNum { mode, ..b.clone() }.rounded(),
        (false, true) => return LogNum { mode, ..a.clone() }.rounded(),
        _ if a.log_mag >= b.log_mag => (a, b),
        _ => (b, a),
    };
    let gap = big.log_mag.sub(&small.log_mag);
    let cancel = mode == Mode::Nearest && big.sign != small.sign;
    if gap > HiReal::from_i64(NEGLIGIBLE_GAP) {
        return LogNum::from_log(big.sign, big.log_mag.clone(), mode);
    }
    let t = gap.neg().exp();
    let log = if cancel {
        if gap.is_zero() {
            return LogNum::zero(mode);
        }
        big.log_mag.add(&t.neg().ln_1p())
    } else {
        big.log_mag.add(&t.ln_1p())
    };
    LogNum::from_log(big.sign, log, mode)
}

/// `|a|^k`: the log is scaled by `k`.
pub fn log_pow(a: &LogNum, k: &HiReal) -> LogNum {
    if a.is_zero() {
        return LogNum::zero(a.mode);
    }
    if k.is_zero() {
        return LogNum::from_log(Sign::Pos, HiReal::zero(), a.mode);
    }
    LogNum::from_log(Sign::Pos, a.log_mag.mul(k), a.mode)
}

impl PartialOrd for LogNum {
    /// Orders by value.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let rank = |s: Sign| match s {
            Sign::Neg => 0,
            Sign::Zero => 1,
            Sign::Pos => 2,
        };
        Some(match rank(self.sign).cmp(&rank(other.sign)) {
            Ordering::Equal => match self.sign {
                Sign::Zero => Ordering::Equal,
                Sign::Pos => self.log_mag.cmp(&other.log_mag),
                Sign::Neg => other.log_mag.cmp(&self.log_mag),
            },
            o => o,
        })
    }
}

impl Serialize for LogNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LogNum", 4)?;
        st.serialize_field("sign", self.sign.symbol())?;
        st.serialize_field("ln_abs", &self.log_mag)?;
        st.serialize_field("log10_abs", &self.log10_mag())?;
        st.serialize_field("mode", &self.mode)?;
        st.end()
    }
}
