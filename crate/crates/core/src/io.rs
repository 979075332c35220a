//! Bit-stable structured-text serialization for tensors, realizations,
//! channels, states and verification reports.
//!
//! One file holds one value. Documents are JSON with a fixed key order and
//! floats printed with 17 significant digits (`{:.16e}`), which round-trip
//! bit-exactly through a conforming parser. The parser here is deliberately
//! minimal (objects, arrays, strings, numbers, booleans, null) and reports
//! errors with the byte offset at which they occurred.
//!
//! Document shapes:
//!
//! ```text
//! tensor          {"shape":[…],"entries":[[re,im],…]}            (row-major)
//! dh realization  {"type":"dh-realization","bridge_group":"Z2",
//!                  "kraus":[tensor…],"dressing":null
//!                    | {"type":"phase","thetas":[…]}
//!                    | {"type":"shifts","shifts":[…]}}
//! dd/dm           {"type":"dd-realization"|"dm-realization","kraus":[tensor…]}
//! cp map          {"type":"cp-map","kraus":[tensor…]}
//! report          {"proposition":…,"theory":…,"group":…,"trials":…,
//!                  "seed":…,"tolerance":…,"max_violation":…,
//!                  "fitted_scalars":[…],"pass":…}
//! ```
//!
//! Realization Kraus tensors are rank-3 `[out, bridge, in]` (or
//! `[out, env, in]`); channel Kraus tensors are rank-2 `[out, in]`. Shift
//! dressings hold element indices into the bridge group's enumeration.

use std::fmt::Write as _;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::cpm::{CpMap, PureMap};
use crate::dilation::DdRealization;
use crate::group::FiniteAbelianGroup;
use crate::hypercube::{DhRealization, Dressing};
use crate::group::PhaseFunction;
use crate::tensor::Tensor;
use crate::verify::VerificationReport;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("value contains a non-finite number")]
    NonFinite,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type IoResult<T> = Result<T, IoError>;

/// Parsed JSON value. Numbers keep their raw text so integer fields can be
/// recovered exactly.
#[derive(Clone, Debug, PartialEq)]
pub enum JsonValue {
    Null,
    Bool(bool),
    Num { value: f64, raw: String },
    Str(String),
    Arr(Vec<JsonValue>),
    Obj(Vec<(String, JsonValue)>),
}

impl JsonValue {
    pub fn get(&self, key: &str) -> Option<&JsonValue> {
        match self {
            JsonValue::Obj(fields) => {
                fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
            }
            _ => None,
        }
    }

    pub fn require(&self, key: &str) -> IoResult<&JsonValue> {
        self.get(key)
            .ok_or_else(|| IoError::Schema(format!("missing field {key:?}")))
    }

    pub fn as_f64(&self) -> IoResult<f64> {
        match self {
            JsonValue::Num { value, .. } => Ok(*value),
            _ => Err(IoError::Schema("expected a number".to_string())),
        }
    }

    pub fn as_u64(&self) -> IoResult<u64> {
        match self {
            JsonValue::Num { raw, .. } => raw
                .parse::<u64>()
                .map_err(|_| IoError::Schema(format!("expected an integer, got {raw:?}"))),
            _ => Err(IoError::Schema("expected a number".to_string())),
        }
    }

    pub fn as_usize(&self) -> IoResult<usize> {
        Ok(self.as_u64()? as usize)
    }

    pub fn as_bool(&self) -> IoResult<bool> {
        match self {
            JsonValue::Bool(b) => Ok(*b),
            _ => Err(IoError::Schema("expected a boolean".to_string())),
        }
    }

    pub fn as_str(&self) -> IoResult<&str> {
        match self {
            JsonValue::Str(s) => Ok(s),
            _ => Err(IoError::Schema("expected a string".to_string())),
        }
    }

    pub fn as_arr(&self) -> IoResult<&[JsonValue]> {
        match self {
            JsonValue::Arr(items) => Ok(items),
            _ => Err(IoError::Schema("expected an array".to_string())),
        }
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> IoResult<T> {
        Err(IoError::Parse { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len()
            && matches!(self.bytes[self.pos], b' ' | b'\t' | b'\n' | b'\r')
        {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> IoResult<()> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {:?}", byte as char))
        }
    }

    fn parse_value(&mut self) -> IoResult<JsonValue> {
        self.skip_ws();
        match self.peek() {
            Some(b'{') => self.parse_object(),
            Some(b'[') => self.parse_array(),
            Some(b'"') => Ok(JsonValue::Str(self.parse_string()?)),
            Some(b't') => self.parse_keyword("true", JsonValue::Bool(true)),
            Some(b'f') => self.parse_keyword("false", JsonValue::Bool(false)),
            Some(b'n') => self.parse_keyword("null", JsonValue::Null),
            Some(c) if c == b'-' || c.is_ascii_digit() => self.parse_number(),
            Some(c) => self.err(format!("unexpected byte {:?}", c as char)),
            None => self.err("unexpected end of input"),
        }
    }

    fn parse_keyword(&mut self, word: &str, value: JsonValue) -> IoResult<JsonValue> {
        if self.bytes[self.pos..].starts_with(word.as_bytes()) {
            self.pos += word.len();
            Ok(value)
        } else {
            self.err(format!("expected {word:?}"))
        }
    }

    fn parse_number(&mut self) -> IoResult<JsonValue> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        let raw = std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("digits are valid utf-8")
            .to_string();
        match raw.parse::<f64>() {
            Ok(value) if value.is_finite() => Ok(JsonValue::Num { value, raw }),
            _ => {
                self.pos = start;
                self.err(format!("invalid number {raw:?}"))
            }
        }
    }

    fn parse_string(&mut self) -> IoResult<String> {
        self.expect(b'"')?;
        let mut out = String::new();
        loop {
            match self.peek() {
                None => return self.err("unterminated string"),
                Some(b'"') => {
                    self.pos += 1;
                    return Ok(out);
                }
                Some(b'\\') => {
                    self.pos += 1;
                    match self.peek() {
                        Some(b'"') => out.push('"'),
                        Some(b'\\') => out.push('\\'),
                        Some(b'/') => out.push('/'),
                        Some(b'n') => out.push('\n'),
                        Some(b't') => out.push('\t'),
                        Some(b'r') => out.push('\r'),
                        Some(b'u') => {
                            if self.pos + 4 >= self.bytes.len() {
                                return self.err("truncated unicode escape");
                            }
                            let hex =
                                std::str::from_utf8(&self.bytes[self.pos + 1..self.pos + 5])
                                    .map_err(|_| IoError::Parse {
                                        offset: self.pos,
                                        message: "invalid unicode escape".to_string(),
                                    })?;
                            let code = u32::from_str_radix(hex, 16).map_err(|_| {
                                IoError::Parse {
                                    offset: self.pos,
                                    message: "invalid unicode escape".to_string(),
                                }
                            })?;
                            out.push(char::from_u32(code).unwrap_or('\u{fffd}'));
                            self.pos += 4;
                        }
                        _ => return self.err("invalid escape"),
                    }
                    self.pos += 1;
                }
                Some(_) => {
                    // consume one UTF-8 scalar
                    let rest = std::str::from_utf8(&self.bytes[self.pos..]).map_err(|_| {
                        IoError::Parse {
                            offset: self.pos,
                            message: "invalid utf-8".to_string(),
                        }
                    })?;
                    let ch = rest.chars().next().expect("nonempty");
                    out.push(ch);
                    self.pos += ch.len_utf8();
                }
            }
        }
    }

    fn parse_array(&mut self) -> IoResult<JsonValue> {
        self.expect(b'[')?;
        let mut items = Vec::new();
        self.skip_ws();
        if self.peek() == Some(b']') {
            self.pos += 1;
            return Ok(JsonValue::Arr(items));
        }
        loop {
            items.push(self.parse_value()?);
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                }
                Some(b']') => {
                    self.pos += 1;
                    return Ok(JsonValue::Arr(items));
                }
                _ => return self.err("expected ',' or ']'"),
            }
        }
    }

    fn parse_object(&mut self) -> IoResult<JsonValue> {
        self.expect(b'{')?;
        let mut fields = Vec::new();
        self.skip_ws();
        if self.peek() == Some(b'}') {
            self.pos += 1;
            return Ok(JsonValue::Obj(fields));
        }
        loop {
            self.skip_ws();
            let key = self.parse_string()?;
            self.skip_ws();
            self.expect(b':')?;
            let value = self.parse_value()?;
            fields.push((key, value));
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                }
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(JsonValue::Obj(fields));
                }
                _ => return self.err("expected ',' or '}'"),
            }
        }
    }
}

/// Parses one JSON document; trailing garbage is an error.
pub fn parse_json(input: &str) -> IoResult<JsonValue> {
    let mut parser = Parser { bytes: input.as_bytes(), pos: 0 };
    let value = parser.parse_value()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return parser.err("trailing characters after document");
    }
    Ok(value)
}

/// Formats a float with 17 significant digits; round-trips bit-exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn push_f64(out: &mut String, x: f64) -> IoResult<()> {
    if !x.is_finite() {
        return Err(IoError::NonFinite);
    }
    let _ = write!(out, "{x:.16e}");
    Ok(())
}

fn push_string(out: &mut String, s: &str) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

fn push_tensor(out: &mut String, t: &Tensor) -> IoResult<()> {
    out.push_str("{\"shape\":[");
    for (k, d) in t.shape().iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "{d}");
    }
    out.push_str("],\"entries\":[");
    for (k, z) in t.data().iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        out.push('[');
        push_f64(out, z.re)?;
        out.push(',');
        push_f64(out, z.im)?;
        out.push(']');
    }
    out.push_str("]}");
    Ok(())
}

/// Serializes a tensor document.
pub fn tensor_to_json(t: &Tensor) -> IoResult<String> {
    let mut out = String::new();
    push_tensor(&mut out, t)?;
    out.push('\n');
    Ok(out)
}

fn tensor_from_value(v: &JsonValue) -> IoResult<Tensor> {
    let shape: Vec<usize> = v
        .require("shape")?
        .as_arr()?
        .iter()
        .map(|d| d.as_usize())
        .collect::<IoResult<_>>()?;
    let entries = v.require("entries")?.as_arr()?;
    let mut data = Vec::with_capacity(entries.len());
    for entry in entries {
        let pair = entry.as_arr()?;
        if pair.len() != 2 {
            return Err(IoError::Schema(
                "tensor entries must be [re, im] pairs".to_string(),
            ));
        }
        data.push(C64::new(pair[0].as_f64()?, pair[1].as_f64()?));
    }
    Tensor::new(shape, data)
        .map_err(|e| IoError::Schema(format!("inconsistent tensor document: {e}")))
}

/// Parses a tensor document.
pub fn tensor_from_json(input: &str) -> IoResult<Tensor> {
    tensor_from_value(&parse_json(input)?)
}

fn push_kraus_list(out: &mut String, kraus: &[Tensor]) -> IoResult<()> {
    out.push_str("\"kraus\":[");
    for (k, t) in kraus.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        push_tensor(out, t)?;
    }
    out.push(']');
    Ok(())
}

/// A deserialized map document: which theory it denotes in, plus the data.
#[derive(Clone, Debug)]
pub enum MapDocument {
    DensityHypercube(DhRealization),
    DoubleDilation(DdRealization),
    DoubleMixing(DdRealization),
    Channel(CpMap),
}

/// Serializes a density-hypercube realization.
pub fn dh_realization_to_json(r: &DhRealization) -> IoResult<String> {
    let mut out = String::new();
    out.push_str("{\"type\":\"dh-realization\",\"bridge_group\":");
    push_string(&mut out, &r.bridge().spec_string());
    out.push(',');
    push_kraus_list(&mut out, r.kraus())?;
    out.push_str(",\"dressing\":");
    match r.dressing() {
        None => out.push_str("null"),
        Some(Dressing::Phase(psi)) => {
            out.push_str("{\"type\":\"phase\",\"thetas\":[");
            for (k, t) in psi.thetas().iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                push_f64(&mut out, *t)?;
            }
            out.push_str("]}");
        }
        Some(Dressing::Shifts(ks)) => {
            out.push_str("{\"type\":\"shifts\",\"shifts\":[");
            for (k, s) in ks.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{s}");
            }
            out.push_str("]}");
        }
    }
    out.push_str("}\n");
    Ok(out)
}

/// Serializes a double-dilation or double-mixing realization.
pub fn dd_realization_to_json(r: &DdRealization, mixing: bool) -> IoResult<String> {
    let mut out = String::new();
    out.push_str(if mixing {
        "{\"type\":\"dm-realization\","
    } else {
        "{\"type\":\"dd-realization\","
    });
    push_kraus_list(&mut out, r.kraus())?;
    out.push_str("}\n");
    Ok(out)
}

/// Serializes a channel in Kraus form.
pub fn cp_map_to_json(phi: &CpMap) -> IoResult<String> {
    let mut out = String::new();
    out.push_str("{\"type\":\"cp-map\",");
    let kraus: Vec<Tensor> = phi.kraus().iter().map(|k| k.matrix().clone()).collect();
    push_kraus_list(&mut out, &kraus)?;
    out.push_str("}\n");
    Ok(out)
}

fn kraus_from_value(v: &JsonValue) -> IoResult<Vec<Tensor>> {
    v.require("kraus")?
        .as_arr()?
        .iter()
        .map(tensor_from_value)
        .collect()
}

/// Parses any map document, dispatching on its `type` field.
pub fn map_document_from_json(input: &str) -> IoResult<MapDocument> {
    let v = parse_json(input)?;
    let kind = v.require("type")?.as_str()?.to_string();
    match kind.as_str() {
        "dh-realization" => {
            let bridge = FiniteAbelianGroup::parse(v.require("bridge_group")?.as_str()?)
                .map_err(|e| IoError::Schema(e.to_string()))?;
            let kraus = kraus_from_value(&v)?;
            let dressing = match v.require("dressing")? {
                JsonValue::Null => None,
                d => match d.require("type")?.as_str()? {
                    "phase" => {
                        let thetas: Vec<f64> = d
                            .require("thetas")?
                            .as_arr()?
                            .iter()
                            .map(|t| t.as_f64())
                            .collect::<IoResult<_>>()?;
                        let psi = PhaseFunction::new(bridge.clone(), thetas)
                            .map_err(|e| IoError::Schema(e.to_string()))?;
                        Some(Dressing::Phase(psi))
                    }
                    "shifts" => {
                        let shifts: Vec<usize> = d
                            .require("shifts")?
                            .as_arr()?
                            .iter()
                            .map(|s| s.as_usize())
                            .collect::<IoResult<_>>()?;
                        Some(Dressing::Shifts(shifts))
                    }
                    other => {
                        return Err(IoError::Schema(format!("unknown dressing {other:?}")))
                    }
                },
            };
            let r = DhRealization::new(kraus, bridge, dressing)
                .map_err(|e| IoError::Schema(e.to_string()))?;
            Ok(MapDocument::DensityHypercube(r))
        }
        "dd-realization" | "dm-realization" => {
            let r = DdRealization::new(kraus_from_value(&v)?)
                .map_err(|e| IoError::Schema(e.to_string()))?;
            if kind == "dm-realization" {
                Ok(MapDocument::DoubleMixing(r))
            } else {
                Ok(MapDocument::DoubleDilation(r))
            }
        }
        "cp-map" => {
            let kraus: Vec<PureMap> = kraus_from_value(&v)?
                .into_iter()
                .map(|t| PureMap::new(t).map_err(|e| IoError::Schema(e.to_string())))
                .collect::<IoResult<_>>()?;
            let phi = CpMap::from_kraus(kraus).map_err(|e| IoError::Schema(e.to_string()))?;
            Ok(MapDocument::Channel(phi))
        }
        other => Err(IoError::Schema(format!("unknown document type {other:?}"))),
    }
}

fn push_report(out: &mut String, r: &VerificationReport) -> IoResult<()> {
    out.push_str("{\"proposition\":");
    push_string(out, &r.proposition);
    out.push_str(",\"theory\":");
    push_string(out, &r.theory);
    out.push_str(",\"group\":");
    push_string(out, &r.group);
    let _ = write!(out, ",\"trials\":{}", r.trials);
    let _ = write!(out, ",\"seed\":{}", r.seed);
    out.push_str(",\"tolerance\":");
    push_f64(out, r.tolerance)?;
    out.push_str(",\"max_violation\":");
    push_f64(out, r.max_violation)?;
    out.push_str(",\"fitted_scalars\":[");
    for (k, s) in r.fitted_scalars.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        push_f64(out, *s)?;
    }
    let _ = write!(out, "],\"pass\":{}", r.pass);
    out.push('}');
    Ok(())
}

/// Serializes one report. Wall-clock time is deliberately omitted so that
/// identical configurations produce identical bytes.
pub fn report_to_json(r: &VerificationReport) -> IoResult<String> {
    let mut out = String::new();
    push_report(&mut out, r)?;
    out.push('\n');
    Ok(out)
}

/// Serializes a batch of reports as one array document.
pub fn reports_to_json(reports: &[VerificationReport]) -> IoResult<String> {
    let mut out = String::new();
    out.push('[');
    for (k, r) in reports.iter().enumerate() {
        if k > 0 {
            out.push_str(",\n ");
        }
        push_report(&mut out, r)?;
    }
    out.push_str("]\n");
    Ok(out)
}

fn report_from_value(v: &JsonValue) -> IoResult<VerificationReport> {
    Ok(VerificationReport {
        proposition: v.require("proposition")?.as_str()?.to_string(),
        theory: v.require("theory")?.as_str()?.to_string(),
        group: v.require("group")?.as_str()?.to_string(),
        trials: v.require("trials")?.as_u64()?,
        seed: v.require("seed")?.as_u64()?,
        tolerance: v.require("tolerance")?.as_f64()?,
        max_violation: v.require("max_violation")?.as_f64()?,
        fitted_scalars: v
            .require("fitted_scalars")?
            .as_arr()?
            .iter()
            .map(|s| s.as_f64())
            .collect::<IoResult<_>>()?,
        pass: v.require("pass")?.as_bool()?,
        elapsed_ms: 0.0,
    })
}

/// Parses one report document.
pub fn report_from_json(input: &str) -> IoResult<VerificationReport> {
    report_from_value(&parse_json(input)?)
}

/// Parses a batch of reports.
pub fn reports_from_json(input: &str) -> IoResult<Vec<VerificationReport>> {
    parse_json(input)?
        .as_arr()?
        .iter()
        .map(report_from_value)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube;
    use crate::verify::{self, Rng};

    #[test]
    fn float_formatting_round_trips_bit_exactly() {
        let mut rng = Rng::new(3);
        for _ in 0..1000 {
            let x = rng.gaussian() * 10f64.powi((rng.index(40) as i32) - 20);
            let back: f64 = fmt_f64(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x}");
        }
        assert_eq!(fmt_f64(0.25), "2.5000000000000000e-1");
    }

    #[test]
    fn tensor_round_trip_is_byte_identical() {
        let id = Tensor::identity(3);
        let json = tensor_to_json(&id).unwrap();
        let back = tensor_from_json(&json).unwrap();
        assert_eq!(back, id);
        assert_eq!(tensor_to_json(&back).unwrap(), json);
    }

    #[test]
    fn uniform_plus_state_document_entries() {
        let plus = Tensor::from_fn(&[2, 2, 2, 2], |_| C64::new(0.25, 0.0));
        let json = tensor_to_json(&plus).unwrap();
        assert_eq!(json.matches("[2.5000000000000000e-1,0.0000000000000000e0]").count(), 16);
    }

    #[test]
    fn parse_errors_carry_byte_offsets() {
        match tensor_from_json("{\"shape\":[2], \"entries\":[[1,0],[0,zz]]}") {
            Err(IoError::Parse { offset, .. }) => assert_eq!(offset, 34),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_json("[1, 2") {
            Err(IoError::Parse { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn realization_documents_round_trip() {
        let group = FiniteAbelianGroup::cyclic(3);
        let maps = [
            hypercube::hypdec_map(&group),
            hypercube::bridge_phase_map(
                &group,
                &PhaseFunction::new(group.clone(), vec![0.0, 0.7, 0.7]).unwrap(),
            )
            .unwrap(),
            hypercube::shifted_bridge_map(&FiniteAbelianGroup::cyclic(2), 1),
        ];
        for map in &maps {
            let rs = match map.certificate() {
                hypercube::Certificate::Realizations(rs) => rs,
                _ => panic!("expected certificate"),
            };
            let json = dh_realization_to_json(&rs[0].1).unwrap();
            match map_document_from_json(&json).unwrap() {
                MapDocument::DensityHypercube(back) => {
                    assert_eq!(back, rs[0].1);
                    assert_eq!(dh_realization_to_json(&back).unwrap(), json);
                    // denotes to the same tensor
                    let denoted = hypercube::dh_denote(&back).unwrap();
                    assert!(denoted.max_abs_diff(map).unwrap() < 1e-12);
                }
                other => panic!("wrong document {other:?}"),
            }
        }
    }

    #[test]
    fn dd_and_cp_documents_round_trip() {
        let mut rng = Rng::new(5);
        let kraus = vec![verify::gaussian_tensor(&[2, 2, 2], &mut rng)];
        let r = DdRealization::new(kraus).unwrap();
        let json = dd_realization_to_json(&r, false).unwrap();
        match map_document_from_json(&json).unwrap() {
            MapDocument::DoubleDilation(back) => assert_eq!(back, r),
            other => panic!("wrong document {other:?}"),
        }
        let json = dd_realization_to_json(&r, true).unwrap();
        assert!(matches!(
            map_document_from_json(&json).unwrap(),
            MapDocument::DoubleMixing(_)
        ));

        let phi = verify::random_cp_map(2, 2, &mut rng);
        let json = cp_map_to_json(&phi).unwrap();
        match map_document_from_json(&json).unwrap() {
            MapDocument::Channel(back) => {
                assert!(back.transfer().max_abs_diff(&phi.transfer()).unwrap() < 1e-15)
            }
            other => panic!("wrong document {other:?}"),
        }
    }

    #[test]
    fn report_round_trip_preserves_values() {
        let report = VerificationReport {
            proposition: "1".to_string(),
            theory: "density-hypercubes".to_string(),
            group: "Z2,Z3".to_string(),
            trials: 200,
            seed: 42,
            tolerance: 1e-9,
            max_violation: 3.25e-13,
            fitted_scalars: vec![2.0, 1.0],
            pass: true,
            elapsed_ms: 12.5,
        };
        let json = report_to_json(&report).unwrap();
        let back = report_from_json(&json).unwrap();
        assert_eq!(back.proposition, report.proposition);
        assert_eq!(back.seed, report.seed);
        assert_eq!(back.max_violation.to_bits(), report.max_violation.to_bits());
        assert_eq!(back.fitted_scalars, report.fitted_scalars);
        assert_eq!(back.pass, report.pass);
        // wall-clock time is not part of the document
        assert!(!json.contains("elapsed"));
        assert_eq!(report_to_json(&back).unwrap(), json);
    }

    #[test]
    fn unknown_document_types_are_schema_errors() {
        assert!(matches!(
            map_document_from_json("{\"type\":\"mystery\"}"),
            Err(IoError::Schema(_))
        ));
        assert!(matches!(
            map_document_from_json("{\"no_type\":1}"),
            Err(IoError::Schema(_))
        ));
    }
}
