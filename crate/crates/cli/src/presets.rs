use std::fmt;

use digit_moments::moments::Scaling;

/// One of the nine published moment plots. All are drawn against
/// `log_b m` and sample every integer in `m_lo..=m_hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigurePreset {
    pub id: u32,
    pub base: u32,
    pub digits: &'static [u32],
    pub s: f64,
    pub scaling: Scaling,
    pub m_lo: u64,
    pub m_hi: u64,
    /// y-axis label in gnuplot enhanced text.
    pub ylabel: &'static str,
}

pub const PRESETS: [FigurePreset; 9] = [
    FigurePreset {
        id: 1,
        base: 2,
        digits: &[1],
        s: 1.0,
        scaling: Scaling::KappaLinear,
        m_lo: 20,
        m_hi: 12800,
        ylabel: "(m+1) u_m(1)",
    },
    FigurePreset {
        id: 2,
        base: 3,
        digits: &[2],
        s: 1.0,
        scaling: Scaling::KappaLinear,
        m_lo: 20,
        m_hi: 50000,
        ylabel: "(m+1) u_m(1)",
    },
    FigurePreset {
        id: 3,
        base: 10,
        digits: &[9],
        s: 1.0,
        scaling: Scaling::KappaLinear,
        m_lo: 20,
        m_hi: 100000,
        ylabel: "(m+1) u_m(1)",
    },
    FigurePreset {
        id: 4,
        base: 3,
        digits: &[0, 2],
        s: 1.0,
        scaling: Scaling::KappaLinear,
        m_lo: 21,
        m_hi: 27000,
        ylabel: "(m+1) u_m(1)",
    },
    FigurePreset {
        id: 5,
        base: 3,
        digits: &[1, 2],
        s: 1.0,
        scaling: Scaling::KappaLinear,
        m_lo: 21,
        m_hi: 9000,
        ylabel: "(m+1) u_m(1)",
    },
    FigurePreset {
        id: 6,
        base: 2,
        digits: &[0, 1],
        s: 2.0,
        scaling: Scaling::KappaPochhammer,
        m_lo: 16,
        m_hi: 10000,
        ylabel: "(m+1)(m+2)/2 u_m(2)",
    },
    FigurePreset {
        id: 7,
        base: 10,
        digits: &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9],
        s: 3.0,
        scaling: Scaling::KappaPochhammer,
        m_lo: 1,
        m_hi: 10000,
        ylabel: "(m+1)(m+2)(m+3)/6 u_m(3)",
    },
    FigurePreset {
        id: 8,
        base: 8,
        digits: &[0, 1, 3, 5],
        s: 1.0,
        scaling: Scaling::KappaLinear,
        m_lo: 1,
        m_hi: 10000,
        ylabel: "(7/5)^m (m+1) u_m(1)",
    },
    FigurePreset {
        id: 9,
        base: 8,
        digits: &[0, 1, 3, 5],
        s: 3.0,
        scaling: Scaling::KappaPochhammer,
        m_lo: 1,
        m_hi: 10000,
        ylabel: "(7/5)^m C(m+3,3) u_m(3)",
    },
];

pub fn preset(id: u32) -> Option<&'static FigurePreset> {
    PRESETS.iter().find(|p| p.id == id)
}

impl FigurePreset {
    pub fn rows(&self) -> u64 {
        self.m_hi - self.m_lo + 1
    }
}

/// One line per preset; this is the format of the checked-in snapshot.
impl fmt::Display for FigurePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        write!(
            f,
            "{} base={} digits={} s={} scale={} m={}..={} x=log_b(m)",
            self.id,
            self.base,
            digits.join(","),
            self.s,
            self.scaling,
            self.m_lo,
            self.m_hi
        )
    }
}
