use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use thiserror::Error;

use crate::enforce::{format_inputs, format_outputs, Step};
use crate::logic::{Alphabet, Letter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GenMode {
    #[default]
    Random,
    /// Traces come in pairs; the second of each pair is the first with the
    /// order of its input bits and of its output bits reversed.
    Symmetric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub inputs: usize,
    pub outputs: usize,
    pub n: usize,
    pub len: usize,
    /// Probability that a bit flips between consecutive steps.
    pub flip: f64,
    pub seed: u64,
    pub mode: GenMode,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("flip probability {0} is outside [0, 1]")]
    Flip(f64),
    #[error("length must be at least 1")]
    Length,
    #[error("need at least one trace")]
    NoTraces,
    #[error(transparent)]
    Alphabet(#[from] crate::logic::AlphabetError),
}

fn names(prefix: &str, count: usize) -> Vec<String> {
    match count {
        1 => vec![prefix.to_string()],
        _ => (1..=count).map(|j| format!("{prefix}{j}")).collect(),
    }
}

impl GenConfig {
    fn validate(&self) -> Result<(), GenError> {
        if !(0.0..=1.0).contains(&self.flip) {
            return Err(GenError::Flip(self.flip));
        }
        if self.len == 0 {
            return Err(GenError::Length);
        }
        if self.n == 0 {
            return Err(GenError::NoTraces);
        }
        Ok(())
    }

    /// Inputs `i` or `i1..`, outputs `o` or `o1..`.
    pub fn alphabet(&self) -> Result<Alphabet, GenError> {
        Ok(Alphabet::new(names("i", self.inputs), names("o", self.outputs))?)
    }
}

/// Uniform in [0, 1) from the top 53 bits.
fn unit(rng: &mut SplitMix64) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn reverse_bits(letter: Letter, first: usize, count: usize) -> Letter {
    (0..count).filter(|j| letter >> (first + j) & 1 == 1).fold(0, |acc, j| acc | 1 << (first + count - 1 - j))
}

/// The first step is all-false; afterwards every bit of every trace flips
/// independently. Draws go trace by trace, outputs before inputs.
pub fn gen_steps(cfg: &GenConfig) -> Result<Vec<Step>, GenError> {
    cfg.validate()?;
    let alphabet = cfg.alphabet()?;
    let (in_mask, out_mask) = (alphabet.input_mask(), alphabet.output_mask() & !alphabet.end_mask());
    let mut rng = SplitMix64::seed_from_u64(cfg.seed);
    let drawn = match cfg.mode {
        GenMode::Random => cfg.n,
        GenMode::Symmetric => cfg.n.div_ceil(2),
    };
    let mut cur = vec![0 as Letter; drawn];
    let mut steps = Vec::with_capacity(cfg.len);
    for t in 0..cfg.len {
        if t > 0 {
            for letter in cur.iter_mut() {
                for mask in [out_mask, in_mask] {
                    for bit in (0..64).filter(|b| mask >> b & 1 == 1) {
                        if unit(&mut rng) < cfg.flip {
                            *letter ^= 1 << bit;
                        }
                    }
                }
            }
        }
        let letters: Vec<Letter> = match cfg.mode {
            GenMode::Random => cur.clone(),
            GenMode::Symmetric => (0..cfg.n)
                .map(|k| {
                    let l = cur[k / 2];
                    if k % 2 == 0 {
                        l
                    } else {
                        reverse_bits(l, 0, cfg.inputs) | reverse_bits(l, cfg.inputs, cfg.outputs)
                    }
                })
                .collect(),
        };
        steps.push(Step {
            outputs: letters.iter().map(|l| l & out_mask).collect(),
            inputs: letters.iter().map(|l| l & in_mask).collect(),
        });
    }
    Ok(steps)
}

/// The generated steps in the stream format.
pub fn gen_stream(cfg: &GenConfig) -> Result<String, GenError> {
    let alphabet = cfg.alphabet()?;
    let mut out = String::new();
    for step in gen_steps(cfg)? {
        out += &format_outputs(&step.outputs, &alphabet, false);
        out.push('\n');
        out += &format_inputs(&step.inputs, &alphabet);
        out.push('\n');
    }
    Ok(out)
}
