//! Serde helpers: arbitrary-size integers and exact rationals are written as
//! decimal strings so JSON readers never round them.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use serde::Serializer;

pub fn bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

pub fn rational<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn ratio64<S: Serializer>(v: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}
