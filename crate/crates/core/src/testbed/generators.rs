use std::f64::consts::PI;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::spectral::{sample_times, Signal};

use super::noise::{awgn, DEFAULT_SEED};

/// Three-degree-of-freedom free-decay parameters for example 4.
#[derive(Debug, Clone, PartialEq)]
pub struct VibrationParams {
    pub amplitudes: [f64; 3],
    /// Natural frequencies in Hz.
    pub frequencies: [f64; 3],
    pub damping: [f64; 3],
    pub phases: [f64; 3],
}

impl Default for VibrationParams {
    fn default() -> Self {
        Self {
            amplitudes: [1.0; 3],
            frequencies: [1.1, 1.3, 3.1],
            damping: [0.02, 0.012, 0.008],
            phases: [0.0; 3],
        }
    }
}

impl VibrationParams {
    /// Damped frequencies `f_i sqrt(1 - ζ_i²)` in Hz.
    pub fn damped_frequencies(&self) -> [f64; 3] {
        std::array::from_fn(|i| self.frequencies[i] * (1.0 - self.damping[i].powi(2)).sqrt())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleSpec {
    /// 1 to 4.
    pub id: u8,
    pub sample_rate: f64,
    pub duration: f64,
    /// Noise seed, example 4 only.
    pub seed: u64,
    /// Noise level for example 4; `None` leaves it clean.
    pub snr_db: Option<f64>,
    pub vibration: VibrationParams,
}

impl ExampleSpec {
    /// Defaults: 1000 Hz for 1 s for ids 1 to 3; 50 Hz for 20 s at 20 dB for id 4.
    pub fn new(id: u8) -> Result<Self> {
        let (sample_rate, duration) = match id {
            1..=3 => (1000.0, 1.0),
            4 => (50.0, 20.0),
            _ => return Err(Error::invalid(format!("unknown example id {id} (expected 1 to 4)"))),
        };
        Ok(Self {
            id,
            sample_rate,
            duration,
            seed: DEFAULT_SEED,
            snr_db: Some(20.0),
            vibration: VibrationParams::default(),
        })
    }

    pub fn len(&self) -> usize {
        (self.sample_rate * self.duration).round() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One named ground-truth term.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub name: String,
    pub samples: Vec<f64>,
}

impl Component {
    fn from_fn(name: &str, t: &[f64], f: impl Fn(f64) -> f64) -> Self {
        Self { name: name.to_string(), samples: t.iter().map(|&t| f(t)).collect() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedExample {
    pub signal: Signal,
    /// Summing these in order reproduces `signal` bit for bit.
    pub components: Vec<Component>,
}

impl GeneratedExample {
    /// Components other than the additive noise.
    pub fn truths(&self) -> Vec<Component> {
        self.components.iter().filter(|c| c.name != "noise").cloned().collect()
    }

    /// CSV `t,signal,comp1,...,compM`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        write!(w, "t,signal")?;
        for i in 1..=self.components.len() {
            write!(w, ",comp{i}")?;
        }
        writeln!(w)?;
        for (n, t) in self.signal.times().iter().enumerate() {
            write!(w, "{t},{}", self.signal.samples()[n])?;
            for c in &self.components {
                write!(w, ",{}", c.samples[n])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

fn sum_components(components: &[Component], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for c in components {
        for (o, v) in out.iter_mut().zip(&c.samples) {
            *o += v;
        }
    }
    out
}

pub fn gen_example(spec: &ExampleSpec) -> Result<GeneratedExample> {
    if !(spec.sample_rate.is_finite() && spec.sample_rate > 0.0) {
        return Err(Error::invalid(format!("sample rate must be positive, got {}", spec.sample_rate)));
    }
    let len = spec.len();
    if len < 2 {
        return Err(Error::invalid(format!("duration {} s gives fewer than 2 samples", spec.duration)));
    }
    let t = sample_times(len, spec.sample_rate);
    let mut components = match spec.id {
        1 => vec![
            Component::from_fn("f11", &t, |t| 6.0 * t),
            Component::from_fn("f12", &t, |t| 2.0 * (8.0 * PI * t).cos()),
            Component::from_fn("f13", &t, |t| (40.0 * PI * t).cos()),
        ],
        2 => vec![
            Component::from_fn("f21", &t, |t| 6.0 * t * t),
            Component::from_fn("f22", &t, |t| (15.0 * PI * t + PI * t * t).cos()),
            // As printed: 40 Hz up to 0.5 s, 30 Hz after, with a jump at 0.5 s.
            Component::from_fn("f23", &t, |t| {
                if t <= 0.5 {
                    (80.0 * PI * t - 15.0 * PI).cos()
                } else {
                    (60.0 * PI * t).cos()
                }
            }),
        ],
        3 => vec![
            Component::from_fn("f31", &t, |t| 1.0 / (1.2 + (2.0 * PI * t).cos())),
            Component::from_fn("f32", &t, |t| {
                (32.0 * PI * t + 0.2 * (64.0 * PI * t).cos()).cos() / (1.2 + (2.0 * PI * t).sin())
            }),
        ],
        4 => {
            let v = &spec.vibration;
            let fd = v.damped_frequencies();
            (0..3)
                .map(|i| {
                    Component::from_fn(&format!("s{}", i + 1), &t, |t| {
                        let decay = (-2.0 * PI * v.frequencies[i] * v.damping[i] * t).exp();
                        v.amplitudes[i] * decay * (2.0 * PI * t * fd[i] + v.phases[i]).cos()
                    })
                })
                .collect()
        }
        id => return Err(Error::invalid(format!("unknown example id {id} (expected 1 to 4)"))),
    };
    if spec.id == 4 {
        if let Some(snr) = spec.snr_db {
            let clean = sum_components(&components, len);
            components.push(Component { name: "noise".into(), samples: awgn(&clean, snr, spec.seed)? });
        }
    }
    let signal = Signal::new(sum_components(&components, len), spec.sample_rate)?;
    Ok(GeneratedExample { signal, components })
}

pub const ECG_SAMPLE_RATE: f64 = 360.0;
pub const ECG_LEN: usize = 1000;

/// Deterministic ECG-like trace for timing runs when no recording is supplied:
/// Gaussian P/Q/R/S/T waves at 75 beats per minute, slow baseline wander and a
/// weak 60 Hz hum. Not physiologically calibrated.
pub fn synthetic_ecg() -> Signal {
    // (offset from R in s, amplitude in mV, width in s)
    const WAVES: [(f64, f64, f64); 5] =
        [(-0.2, 0.15, 0.025), (-0.03, -0.1, 0.01), (0.0, 1.0, 0.012), (0.03, -0.2, 0.01), (0.28, 0.3, 0.05)];
    const RR: f64 = 0.8;
    let samples = sample_times(ECG_LEN, ECG_SAMPLE_RATE)
        .into_iter()
        .map(|t| {
            let beat = ((t - 0.3) / RR).round();
            let local = t - 0.3 - beat * RR;
            let qrst: f64 = WAVES.iter().map(|&(mu, a, w)| a * (-0.5 * ((local - mu) / w).powi(2)).exp()).sum();
            qrst + 0.1 * (2.0 * PI * 0.3 * t).sin() + 0.02 * (2.0 * PI * 60.0 * t).cos()
        })
        .collect();
    Signal::new(samples, ECG_SAMPLE_RATE).expect("synthetic trace is finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn first(id: u8) -> f64 {
        gen_example(&ExampleSpec::new(id).unwrap()).unwrap().signal.samples()[0]
    }

    #[test]
    fn values_at_origin() {
        assert!((first(1) - 3.0).abs() < 1e-12);
        assert!(first(2).abs() < 1e-12);
        let f3 = 1.0 / 2.2 + 0.2f64.cos() / 1.2;
        assert!((first(3) - f3).abs() < 1e-12);
        assert!((first(3) - 1.271268).abs() < 1e-5);
    }

    #[test]
    fn default_lengths() {
        for id in 1..=4 {
            assert_eq!(gen_example(&ExampleSpec::new(id).unwrap()).unwrap().signal.len(), 1000);
        }
        assert!(ExampleSpec::new(5).is_err());
        assert!(ExampleSpec::new(0).is_err());
    }

    #[test]
    fn components_sum_exactly() {
        for id in 1..=4 {
            let g = gen_example(&ExampleSpec::new(id).unwrap()).unwrap();
            assert_eq!(sum_components(&g.components, g.signal.len()), g.signal.samples());
        }
    }

    #[test]
    fn example_four_components() {
        let g = gen_example(&ExampleSpec::new(4).unwrap()).unwrap();
        let names: Vec<_> = g.components.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["s1", "s2", "s3", "noise"]);
        assert_eq!(g.truths().len(), 3);
        let mut clean = ExampleSpec::new(4).unwrap();
        clean.snr_db = None;
        assert_eq!(gen_example(&clean).unwrap().components.len(), 3);
        let fd = VibrationParams::default().damped_frequencies();
        assert!((fd[0] - 1.0998).abs() < 1e-4);
        assert!((fd[1] - 1.2999).abs() < 1e-4);
        assert!((fd[2] - 3.0999).abs() < 1e-4);
    }

    #[test]
    fn deterministic() {
        let s = ExampleSpec::new(4).unwrap();
        assert_eq!(gen_example(&s).unwrap(), gen_example(&s).unwrap());
        let mut other = s.clone();
        other.seed = 1;
        assert_ne!(gen_example(&s).unwrap().signal, gen_example(&other).unwrap().signal);
    }

    #[test]
    fn chirp_branch_jumps_at_half_second() {
        let g = gen_example(&ExampleSpec::new(2).unwrap()).unwrap();
        let f23 = &g.components[2].samples;
        assert!((f23[500] - (40.0 * PI - 15.0 * PI).cos()).abs() < 1e-12);
        assert!((f23[501] - (60.0 * PI * 0.501).cos()).abs() < 1e-12);
    }

    #[test]
    fn csv_layout() {
        let g = gen_example(&ExampleSpec::new(1).unwrap()).unwrap();
        let mut out = Vec::new();
        g.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,signal,comp1,comp2,comp3"));
        assert_eq!(lines.next(), Some("0,3,0,2,1"));
        assert_eq!(text.lines().count(), 1001);
    }

    #[test]
    fn ecg_stand_in_shape() {
        let e = synthetic_ecg();
        assert_eq!(e.len(), ECG_LEN);
        let peak = e.samples().iter().cloned().fold(f64::MIN, f64::max);
        assert!(peak > 0.9 && peak < 1.3);
    }
}
