//! JSON interchange for groups, subgroups, functions, characters, covariant
//! functions and action tables.
//!
//! Objects that live over a group refer to it by [`group_id`], a fingerprint
//! of its multiplication table, so a function file can be checked against
//! the group file it is loaded with. Floats are written with 17 significant
//! digits, which round-trips every `f64` exactly.

use std::io;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::character::{Character, Phase};
use crate::covariant::CovariantFunction;
use crate::error::{Error, Result};
use crate::function::GroupFunction;
use crate::group::{FiniteGroup, QuotientGroup, Subgroup};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupJson {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubgroupJson {
    pub group: String,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionJson {
    pub group: String,
    pub values: Vec<[f64; 2]>,
}

/// `phases[i]` belongs to `members[i]`, as `[num, den]` with `0 <= num < den`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterJson {
    pub domain: String,
    pub members: Vec<usize>,
    pub phases: Vec<[u64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovariantJson {
    pub group: String,
    pub normal: SubgroupJson,
    pub character: CharacterJson,
    pub section: Vec<[f64; 2]>,
}

/// `action[h][k] = theta_h(k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionJson {
    pub action: Vec<Vec<usize>>,
}

/// `"g<order>-<16 hex digits>"`, an FNV-1a hash of the order and table.
pub fn group_id(group: &FiniteGroup) -> String {
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |v: u64| {
        for byte in v.to_le_bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(PRIME);
        }
    };
    let n = group.order();
    feed(n as u64);
    for a in 0..n {
        for b in 0..n {
            feed(group.mul(a, b) as u64);
        }
    }
    format!("g{n}-{hash:016x}")
}

fn check_id(expected: &FiniteGroup, found: &str) -> Result<()> {
    if group_id(expected) == found {
        Ok(())
    } else {
        Err(Error::GroupMismatch)
    }
}

fn pairs(values: &[Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|v| [v.re, v.im]).collect()
}

fn complexes(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

impl GroupJson {
    pub fn from_group(group: &FiniteGroup) -> Self {
        GroupJson { order: group.order(), mul: group.table(), labels: group.labels().map(<[String]>::to_vec) }
    }

    pub fn to_group(&self) -> Result<FiniteGroup> {
        if self.mul.len() != self.order {
            return Err(Error::DimensionMismatch { expected: self.order, found: self.mul.len() });
        }
        FiniteGroup::from_table(&self.mul, self.labels.clone())
    }
}

impl SubgroupJson {
    pub fn from_subgroup(n: &Subgroup) -> Self {
        SubgroupJson { group: group_id(n.parent()), members: n.members().to_vec() }
    }

    pub fn to_subgroup(&self, group: &Arc<FiniteGroup>) -> Result<Subgroup> {
        check_id(group, &self.group)?;
        Subgroup::new(group.clone(), self.members.iter().copied())
    }
}

impl FunctionJson {
    pub fn from_function(f: &GroupFunction) -> Self {
        FunctionJson { group: group_id(f.group()), values: pairs(f.values()) }
    }

    pub fn to_function(&self, group: &Arc<FiniteGroup>) -> Result<GroupFunction> {
        check_id(group, &self.group)?;
        GroupFunction::new(group.clone(), complexes(&self.values))
    }
}

impl CharacterJson {
    pub fn from_character(chi: &Character) -> Self {
        let domain = chi.domain();
        CharacterJson {
            domain: group_id(domain.parent()),
            members: domain.members().to_vec(),
            phases: chi.phases().iter().map(|p| [p.num(), p.den()]).collect(),
        }
    }

    /// Rebuilds the character, re-validating the homomorphism law exactly.
    pub fn to_character(&self, group: &Arc<FiniteGroup>) -> Result<Character> {
        check_id(group, &self.domain)?;
        if self.phases.len() != self.members.len() {
            return Err(Error::DimensionMismatch { expected: self.members.len(), found: self.phases.len() });
        }
        let domain = Subgroup::new(group.clone(), self.members.iter().copied())?;
        let mut phases = vec![Phase::ZERO; domain.order()];
        for (&s, &[num, den]) in self.members.iter().zip(&self.phases) {
            if den == 0 || num >= den || num > i64::MAX as u64 {
                return Err(Error::InvalidCharacter(format!("phase {num}/{den} at {s}")));
            }
            phases[domain.position(s).expect("member of its own subgroup")] = Phase::new(num as i64, den);
        }
        Character::new(domain, phases)
    }
}

impl CovariantJson {
    pub fn from_covariant(psi: &CovariantFunction) -> Self {
        CovariantJson {
            group: group_id(psi.group()),
            normal: SubgroupJson::from_subgroup(psi.quotient().normal()),
            character: CharacterJson::from_character(psi.character()),
            section: pairs(psi.section()),
        }
    }

    pub fn to_covariant(&self, group: &Arc<FiniteGroup>) -> Result<CovariantFunction> {
        check_id(group, &self.group)?;
        let normal = self.normal.to_subgroup(group)?;
        let character = self.character.to_character(group)?;
        let quotient = Arc::new(QuotientGroup::new(&normal)?);
        CovariantFunction::from_section(complexes(&self.section), character, quotient)
    }
}

/// `serde_json` formatter that writes floats with 17 significant digits.
#[derive(Clone, Copy, Debug, Default)]
pub struct SigDigits17;

impl Formatter for SigDigits17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Renders a finite float with 17 significant digits, trailing zeros trimmed.
///
/// Plain notation is used for decimal exponents in `-5..17`, scientific
/// notation otherwise.
pub fn format_f64(value: f64) -> String {
    if value == 0.0 {
        return if value.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let sci = format!("{value:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };

    if (-5..17).contains(&exp) {
        let body = if exp >= 0 {
            let int_len = exp as usize + 1;
            if digits.len() <= int_len {
                format!("{digits}{}.0", "0".repeat(int_len - digits.len()))
            } else {
                format!("{}.{}", &digits[..int_len], &digits[int_len..])
            }
        } else {
            format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
        };
        format!("{sign}{body}")
    } else {
        let frac = if digits.len() > 1 { &digits[1..] } else { "0" };
        format!("{sign}{}.{frac}e{exp}", &digits[..1])
    }
}

/// Compact JSON with 17-significant-digit floats.
pub fn to_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits17);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

/// Indented JSON with 17-significant-digit floats.
pub fn to_string_pretty<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    // Re-indent the compact text so float rendering stays in one place.
    let compact = to_string(value)?;
    let tree: serde_json::Value = serde_json::from_str(&compact)?;
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, PrettySig17::default());
    tree.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

/// Pretty printer with the float rendering of [`SigDigits17`].
#[derive(Default)]
struct PrettySig17 {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(fn $name<W: ?Sized + io::Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.inner.$name(writer $(, $arg)*)
        })*
    };
}

impl Formatter for PrettySig17 {
    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }

    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        SigDigits17.write_f64(writer, value)
    }
}

pub fn from_str<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}
