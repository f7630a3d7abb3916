//! Time-windowed laser and microwave tones and the sequences built from them.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{Amplitude, HamiltonianTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeShape {
    #[default]
    Rectangular,
    CosineSquared,
    Linear,
}

/// Rise and fall of a pulse envelope. Durations are in µs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct PulseEdge {
    pub rise: f64,
    pub fall: f64,
    pub shape: EdgeShape,
}

impl PulseEdge {
    pub const RECTANGULAR: PulseEdge = PulseEdge {
        rise: 0.0,
        fall: 0.0,
        shape: EdgeShape::Rectangular,
    };

    /// Symmetric ramps given in nanoseconds.
    pub fn ramps_ns(ramp_ns: f64, shape: EdgeShape) -> Result<Self> {
        let edge = Self {
            rise: ramp_ns * 1e-3,
            fall: ramp_ns * 1e-3,
            shape,
        };
        edge.validate()?;
        Ok(edge)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rise >= 0.0 && self.fall >= 0.0) {
            return Err(Error::invalid(format!(
                "edge durations must be >= 0 (rise {}, fall {})",
                self.rise, self.fall
            )));
        }
        Ok(())
    }

    fn is_sharp(&self) -> bool {
        self.shape == EdgeShape::Rectangular || (self.rise == 0.0 && self.fall == 0.0)
    }

    fn ramp(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match self.shape {
            EdgeShape::Rectangular => 1.0,
            EdgeShape::Linear => x,
            EdgeShape::CosineSquared => (FRAC_PI_2 * x).sin().powi(2),
        }
    }

    /// Envelope in [0, 1] of a pulse switched on over `[start, end)`.
    pub fn envelope(&self, t: f64, start: f64, end: f64) -> f64 {
        if t < start || t >= end {
            return 0.0;
        }
        if self.is_sharp() {
            return 1.0;
        }
        let up = if self.rise > 0.0 {
            self.ramp((t - start) / self.rise)
        } else {
            1.0
        };
        let down = if self.fall > 0.0 {
            self.ramp((end - t) / self.fall)
        } else {
            1.0
        };
        up.min(down)
    }

    /// Times where the envelope is not smooth.
    pub fn kinks(&self, start: f64, end: f64) -> Vec<f64> {
        let mut out = vec![start, end];
        if !self.is_sharp() {
            out.push(start + self.rise);
            out.push(end - self.fall);
        }
        out.retain(|t| t.is_finite() && *t >= start && *t <= end);
        out
    }
}

/// One monochromatic coupling:
/// `(rabi/2) · envelope(t) · exp(i(detuning·(t − time_origin) + phase))`
/// on `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tone {
    pub rabi: f64,
    pub detuning: f64,
    pub phase: f64,
    pub start: f64,
    pub end: f64,
    pub edge: PulseEdge,
    pub time_origin: f64,
}

impl Tone {
    /// A rectangular tone on `[start, end)`.
    pub fn new(rabi: f64, detuning: f64, phase: f64, start: f64, end: f64) -> Self {
        Self {
            rabi,
            detuning,
            phase,
            start,
            end,
            edge: PulseEdge::RECTANGULAR,
            time_origin: 0.0,
        }
    }

    /// A tone switched on for all t ≥ 0.
    pub fn continuous(rabi: f64, detuning: f64, phase: f64) -> Self {
        Self::new(rabi, detuning, phase, 0.0, f64::INFINITY)
    }

    pub fn with_edge(mut self, edge: PulseEdge) -> Self {
        self.edge = edge;
        self
    }

    pub fn with_time_origin(mut self, origin: f64) -> Self {
        self.time_origin = origin;
        self
    }

    #[inline]
    pub fn value(&self, t: f64) -> Complex64 {
        let env = self.edge.envelope(t, self.start, self.end);
        if env == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let arg = self.detuning * (t - self.time_origin) + self.phase;
        Complex64::from_polar(0.5 * self.rabi * env, arg)
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.edge.kinks(self.start, self.end)
    }

    fn shifted(mut self, dt: f64) -> Self {
        self.start += dt;
        self.end += dt;
        self.time_origin += dt;
        self
    }
}

/// Which laser path a pulse travels along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BeamPath {
    /// Reaches every atom with the same strength (microwaves, gate beams).
    Common,
    Perpendicular,
    Parallel,
}

/// A tone on one transition `|upper⟩⟨lower| + h.c.`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseStage {
    pub label: String,
    pub beam: BeamPath,
    pub upper: String,
    pub lower: String,
    pub tone: Tone,
}

impl PulseStage {
    pub fn new(
        label: impl Into<String>,
        beam: BeamPath,
        upper: impl Into<String>,
        lower: impl Into<String>,
        tone: Tone,
    ) -> Self {
        Self {
            label: label.into(),
            beam,
            upper: upper.into(),
            lower: lower.into(),
            tone,
        }
    }

    /// The Hamiltonian term with the tone's Rabi frequency multiplied by `scale`.
    pub fn term(&self, scale: f64) -> HamiltonianTerm {
        let mut tone = self.tone;
        tone.rabi *= scale;
        HamiltonianTerm::coupling(&self.upper, &self.lower, Amplitude::Tone(tone))
    }
}

/// A labeled time interval of a sequence ("pulse1", "wait", ...).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub label: String,
    pub start: f64,
    pub end: f64,
}

/// An ordered pulse program.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sequence {
    pub pulses: Vec<PulseStage>,
    pub segments: Vec<Segment>,
}

impl Sequence {
    pub fn new(pulses: Vec<PulseStage>, segments: Vec<Segment>) -> Self {
        Self { pulses, segments }
    }

    pub fn start(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.start)
            .fold(f64::INFINITY, f64::min)
            .min(0.0)
    }

    pub fn end(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.end)
            .fold(0.0, f64::max)
    }

    pub fn duration(&self) -> f64 {
        self.end() - self.start()
    }

    pub fn segment(&self, label: &str) -> Option<&Segment> {
        self.segments.iter().find(|s| s.label == label)
    }

    /// Segment boundaries, in order.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self
            .segments
            .iter()
            .flat_map(|s| [s.start, s.end])
            .collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// The same program delayed by `dt`, including every phase reference.
    pub fn shifted(&self, dt: f64) -> Self {
        Self {
            pulses: self
                .pulses
                .iter()
                .map(|p| PulseStage {
                    tone: p.tone.shifted(dt),
                    ..p.clone()
                })
                .collect(),
            segments: self
                .segments
                .iter()
                .map(|s| Segment {
                    label: s.label.clone(),
                    start: s.start + dt,
                    end: s.end + dt,
                })
                .collect(),
        }
    }

    /// `self` followed by `times − 1` replays of itself.
    pub fn repeated(&self, times: usize) -> Self {
        let period = self.end() - self.start();
        let mut out = self.clone();
        for k in 1..times {
            let next = self.shifted(period * k as f64);
            out.pulses.extend(next.pulses);
            out.segments.extend(next.segments.into_iter().map(|mut s| {
                s.label = format!("{}#{}", s.label, k + 1);
                s
            }));
        }
        out
    }

    /// Hamiltonian terms for the pulses accepted by `scale_of`, which
    /// returns the Rabi-frequency scale for a pulse or `None` to drop it.
    pub fn terms<F>(&self, mut scale_of: F) -> Vec<HamiltonianTerm>
    where
        F: FnMut(&PulseStage) -> Option<f64>,
    {
        self.pulses
            .iter()
            .filter_map(|p| match scale_of(p) {
                Some(s) if s != 0.0 => Some(p.term(s)),
                _ => None,
            })
            .collect()
    }
}
