//! Allen's interval algebra and the point algebra over interval endpoints.
//!
//! A [`RelationSet`] is a disjunction of the 13 base relations stored as a
//! bit mask, a [`PointRelation`] a disjunction over `{<, =, >}`. The two are
//! linked through [`EndpointQuadruple`], the four endpoint relations that
//! hold between two intervals `I` and `J`:
//! `I.begin ? J.begin`, `I.end ? J.end`, `I.begin ? J.end`, `I.end ? J.begin`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// One of the 13 mutually exclusive Allen relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum BaseRelation {
    Before = 0,
    After,
    Meets,
    MetBy,
    Overlaps,
    OverlappedBy,
    Starts,
    StartedBy,
    During,
    Contains,
    Finishes,
    FinishedBy,
    Equals,
}

impl BaseRelation {
    /// All base relations in canonical order.
    pub const ALL: [BaseRelation; 13] = [
        BaseRelation::Before,
        BaseRelation::After,
        BaseRelation::Meets,
        BaseRelation::MetBy,
        BaseRelation::Overlaps,
        BaseRelation::OverlappedBy,
        BaseRelation::Starts,
        BaseRelation::StartedBy,
        BaseRelation::During,
        BaseRelation::Contains,
        BaseRelation::Finishes,
        BaseRelation::FinishedBy,
        BaseRelation::Equals,
    ];

    const NAMES: [&'static str; 13] = [
        "b", "bi", "m", "mi", "o", "oi", "s", "si", "d", "di", "f", "fi", "e",
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        Self::NAMES[self.index()]
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| Self::ALL[i])
    }

    pub fn inverse(self) -> Self {
        use BaseRelation::*;
        match self {
            Before => After,
            After => Before,
            Meets => MetBy,
            MetBy => Meets,
            Overlaps => OverlappedBy,
            OverlappedBy => Overlaps,
            Starts => StartedBy,
            StartedBy => Starts,
            During => Contains,
            Contains => During,
            Finishes => FinishedBy,
            FinishedBy => Finishes,
            Equals => Equals,
        }
    }

    /// The single endpoint ordering this relation stands for, including the
    /// components forced by `begin < end` on both intervals.
    pub fn endpoints(self) -> EndpointQuadruple {
        use BaseRelation::*;
        use PointRelation as P;
        let (r1, r2, r3, r4) = match self {
            Before => (P::LT, P::LT, P::LT, P::LT),
            After => (P::GT, P::GT, P::GT, P::GT),
            Meets => (P::LT, P::LT, P::LT, P::EQ),
            MetBy => (P::GT, P::GT, P::EQ, P::GT),
            Overlaps => (P::LT, P::LT, P::LT, P::GT),
            OverlappedBy => (P::GT, P::GT, P::LT, P::GT),
            Starts => (P::EQ, P::LT, P::LT, P::GT),
            StartedBy => (P::EQ, P::GT, P::LT, P::GT),
            During => (P::GT, P::LT, P::LT, P::GT),
            Contains => (P::LT, P::GT, P::LT, P::GT),
            Finishes => (P::GT, P::EQ, P::LT, P::GT),
            FinishedBy => (P::LT, P::EQ, P::LT, P::GT),
            Equals => (P::EQ, P::EQ, P::LT, P::GT),
        };
        EndpointQuadruple {
            begin_begin: r1,
            end_end: r2,
            begin_end: r3,
            end_begin: r4,
        }
    }

    /// Composition of two base relations, read from the embedded table.
    pub fn compose(self, other: BaseRelation) -> RelationSet {
        RelationSet(COMPOSITION[self.index()][other.index()])
    }
}

impl fmt::Display for BaseRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

// Row = relation between I and J, column = relation between J and K, cell =
// mask of the possible relations between I and K. Bit order follows
// `BaseRelation::ALL`. Checked against an endpoint-placement oracle in tests.
const COMPOSITION: [[u16; 13]; 13] = [
    [0x0001, 0x1FFF, 0x0001, 0x0155, 0x0001, 0x0155, 0x0001, 0x0001, 0x0155, 0x0001, 0x0155, 0x0001, 0x0001], // b
    [0x1FFF, 0x0002, 0x052A, 0x0002, 0x052A, 0x0002, 0x052A, 0x0002, 0x052A, 0x0002, 0x0002, 0x0002, 0x0002], // bi
    [0x0001, 0x02AA, 0x0001, 0x1C00, 0x0001, 0x0150, 0x0004, 0x0004, 0x0150, 0x0001, 0x0150, 0x0001, 0x0004], // m
    [0x0A15, 0x0002, 0x10C0, 0x0002, 0x0520, 0x0002, 0x0520, 0x0002, 0x0520, 0x0002, 0x0008, 0x0008, 0x0008], // mi
    [0x0001, 0x02AA, 0x0001, 0x02A0, 0x0015, 0x1FF0, 0x0010, 0x0A10, 0x0150, 0x0A15, 0x0150, 0x0015, 0x0010], // o
    [0x0A15, 0x0002, 0x0A10, 0x0002, 0x1FF0, 0x002A, 0x0520, 0x002A, 0x0520, 0x02AA, 0x0020, 0x02A0, 0x0020], // oi
    [0x0001, 0x0002, 0x0001, 0x0008, 0x0015, 0x0520, 0x0040, 0x10C0, 0x0100, 0x0A15, 0x0100, 0x0015, 0x0040], // s
    [0x0A15, 0x0002, 0x0A10, 0x0008, 0x0A10, 0x0020, 0x10C0, 0x0080, 0x0520, 0x0200, 0x0020, 0x0200, 0x0080], // si
    [0x0001, 0x0002, 0x0001, 0x0002, 0x0155, 0x052A, 0x0100, 0x052A, 0x0100, 0x1FFF, 0x0100, 0x0155, 0x0100], // d
    [0x0A15, 0x02AA, 0x0A10, 0x02A0, 0x0A10, 0x02A0, 0x0A10, 0x0200, 0x1FF0, 0x0200, 0x02A0, 0x0200, 0x0200], // di
    [0x0001, 0x0002, 0x0004, 0x0002, 0x0150, 0x002A, 0x0100, 0x002A, 0x0100, 0x02AA, 0x0400, 0x1C00, 0x0400], // f
    [0x0001, 0x02AA, 0x0004, 0x02A0, 0x0010, 0x02A0, 0x0010, 0x0200, 0x0150, 0x0200, 0x1C00, 0x0800, 0x0800], // fi
    [0x0001, 0x0002, 0x0004, 0x0008, 0x0010, 0x0020, 0x0040, 0x0080, 0x0100, 0x0200, 0x0400, 0x0800, 0x1000], // e
];

/// A disjunction of base relations, stored as a 13-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RelationSet(u16);

impl RelationSet {
    pub const EMPTY: RelationSet = RelationSet(0);
    pub const UNIVERSAL: RelationSet = RelationSet(0x1FFF);

    pub fn from_bits(bits: u16) -> Self {
        RelationSet(bits & Self::UNIVERSAL.0)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn single(r: BaseRelation) -> Self {
        RelationSet(1 << r.index())
    }

    pub fn contains(self, r: BaseRelation) -> bool {
        self.0 & (1 << r.index()) != 0
    }

    pub fn insert(&mut self, r: BaseRelation) {
        self.0 |= 1 << r.index();
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_universal(self) -> bool {
        self.0 == Self::UNIVERSAL.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = BaseRelation> {
        BaseRelation::ALL
            .into_iter()
            .filter(move |r| self.contains(*r))
    }

    pub fn intersection(self, other: Self) -> Self {
        RelationSet(self.0 & other.0)
    }

    pub fn union(self, other: Self) -> Self {
        RelationSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn invert(self) -> Self {
        self.iter()
            .map(|r| RelationSet::single(r.inverse()))
            .fold(RelationSet::EMPTY, RelationSet::union)
    }

    /// Union of the pairwise base compositions.
    pub fn compose(self, other: Self) -> Self {
        let mut out = 0u16;
        for a in self.iter() {
            let row = &COMPOSITION[a.index()];
            for b in other.iter() {
                out |= row[b.index()];
                if out == Self::UNIVERSAL.0 {
                    return Self::UNIVERSAL;
                }
            }
        }
        RelationSet(out)
    }

    /// Componentwise union of the endpoint quadruples of every member.
    pub fn endpoints(self) -> EndpointQuadruple {
        self.iter()
            .map(BaseRelation::endpoints)
            .fold(EndpointQuadruple::EMPTY, EndpointQuadruple::union)
    }

    /// All base relations whose endpoint quadruple fits inside `q`.
    /// Empty when no base relation is compatible with `q`.
    pub fn from_endpoints(q: EndpointQuadruple) -> Self {
        BaseRelation::ALL
            .into_iter()
            .filter(|r| q.includes(&r.endpoints()))
            .map(RelationSet::single)
            .fold(RelationSet::EMPTY, RelationSet::union)
    }

    /// A set is convex when its endpoint projection avoids `{<, >}` and
    /// loses nothing on the way back.
    pub fn is_convex(self) -> bool {
        if self.is_empty() {
            return false;
        }
        let q = self.endpoints();
        q.components().iter().all(|p| p.is_convex()) && Self::from_endpoints(q) == self
    }

    /// Every convex relation set, in mask order.
    pub fn enumerate_convex() -> Vec<RelationSet> {
        (1..=Self::UNIVERSAL.0)
            .map(RelationSet)
            .filter(|s| s.is_convex())
            .collect()
    }
}

impl fmt::Display for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for r in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            f.write_str(r.name())?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self)
    }
}

impl FromStr for RelationSet {
    type Err = Error;

    /// Parses comma-separated relation names, e.g. `b,m,o`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut set = RelationSet::EMPTY;
        for part in s.split(',') {
            let name = part.trim();
            let r = BaseRelation::from_name(name)
                .ok_or_else(|| Error::UnknownRelation(name.to_string()))?;
            set.insert(r);
        }
        Ok(set)
    }
}

impl From<BaseRelation> for RelationSet {
    fn from(r: BaseRelation) -> Self {
        RelationSet::single(r)
    }
}

impl FromIterator<BaseRelation> for RelationSet {
    fn from_iter<T: IntoIterator<Item = BaseRelation>>(iter: T) -> Self {
        let mut set = RelationSet::EMPTY;
        for r in iter {
            set.insert(r);
        }
        set
    }
}

/// A disjunction over `{<, =, >}` between two points.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PointRelation(u8);

impl PointRelation {
    pub const EMPTY: PointRelation = PointRelation(0);
    pub const LT: PointRelation = PointRelation(1);
    pub const EQ: PointRelation = PointRelation(2);
    pub const GT: PointRelation = PointRelation(4);
    pub const LE: PointRelation = PointRelation(3);
    pub const GE: PointRelation = PointRelation(6);
    pub const NE: PointRelation = PointRelation(5);
    pub const ALL: PointRelation = PointRelation(7);

    /// The seven consistent (nonempty) point relations.
    pub const CONSISTENT: [PointRelation; 7] = [
        Self::LT,
        Self::EQ,
        Self::LE,
        Self::GT,
        Self::NE,
        Self::GE,
        Self::ALL,
    ];

    pub fn from_bits(bits: u8) -> Self {
        PointRelation(bits & 7)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_convex(self) -> bool {
        self != Self::NE
    }

    pub fn has_lt(self) -> bool {
        self.0 & 1 != 0
    }

    pub fn has_eq(self) -> bool {
        self.0 & 2 != 0
    }

    pub fn has_gt(self) -> bool {
        self.0 & 4 != 0
    }

    pub fn union(self, other: Self) -> Self {
        PointRelation(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        PointRelation(self.0 & other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn inverse(self) -> Self {
        let lt = self.0 & 1;
        let gt = (self.0 >> 2) & 1;
        PointRelation((self.0 & 2) | (lt << 2) | gt)
    }

    pub fn compose(self, other: Self) -> Self {
        // base compositions: < o < = <, < o = = <, < o > = all, = o x = x
        let mut out = 0u8;
        for (bit, _) in [(1u8, ()), (2, ()), (4, ())] {
            if self.0 & bit == 0 {
                continue;
            }
            for obit in [1u8, 2, 4] {
                if other.0 & obit == 0 {
                    continue;
                }
                out |= match (bit, obit) {
                    (2, o) => o,
                    (s, 2) => s,
                    (1, 1) => 1,
                    (4, 4) => 4,
                    _ => 7,
                };
            }
        }
        PointRelation(out)
    }

    pub fn symbol(self) -> &'static str {
        match self.0 {
            0 => "{}",
            1 => "<",
            2 => "=",
            3 => "<=",
            4 => ">",
            5 => "<>",
            6 => ">=",
            _ => "?",
        }
    }
}

impl fmt::Display for PointRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl fmt::Debug for PointRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Endpoint relations between intervals `I` and `J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EndpointQuadruple {
    /// `I.begin ? J.begin`
    pub begin_begin: PointRelation,
    /// `I.end ? J.end`
    pub end_end: PointRelation,
    /// `I.begin ? J.end`
    pub begin_end: PointRelation,
    /// `I.end ? J.begin`
    pub end_begin: PointRelation,
}

impl EndpointQuadruple {
    pub const EMPTY: EndpointQuadruple = EndpointQuadruple {
        begin_begin: PointRelation::EMPTY,
        end_end: PointRelation::EMPTY,
        begin_end: PointRelation::EMPTY,
        end_begin: PointRelation::EMPTY,
    };

    pub fn new(
        begin_begin: PointRelation,
        end_end: PointRelation,
        begin_end: PointRelation,
        end_begin: PointRelation,
    ) -> Self {
        EndpointQuadruple {
            begin_begin,
            end_end,
            begin_end,
            end_begin,
        }
    }

    pub fn components(&self) -> [PointRelation; 4] {
        [self.begin_begin, self.end_end, self.begin_end, self.end_begin]
    }

    pub fn union(self, other: Self) -> Self {
        EndpointQuadruple {
            begin_begin: self.begin_begin.union(other.begin_begin),
            end_end: self.end_end.union(other.end_end),
            begin_end: self.begin_end.union(other.begin_end),
            end_begin: self.end_begin.union(other.end_begin),
        }
    }

    /// Pointwise containment: every component of `other` is a subset of ours.
    pub fn includes(&self, other: &Self) -> bool {
        self.components()
            .iter()
            .zip(other.components().iter())
            .all(|(a, b)| b.is_subset(*a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use BaseRelation::*;

    fn set(s: &str) -> RelationSet {
        s.parse().unwrap()
    }

    #[test]
    fn inverse_is_involutive() {
        for r in BaseRelation::ALL {
            assert_eq!(r.inverse().inverse(), r);
        }
        assert_eq!(Equals.inverse(), Equals);
        assert_eq!(set("b").invert(), set("bi"));
        assert_eq!(set("e").invert(), set("e"));
        assert_eq!(set("b,m,o").invert(), set("bi,mi,oi"));
    }

    #[test]
    fn table_fragment() {
        assert_eq!(Before.compose(Before), set("b"));
        assert_eq!(Before.compose(After), RelationSet::UNIVERSAL);
        assert_eq!(Contains.compose(During), set("o,oi,d,s,f,di,si,fi,e"));
        assert_eq!(Before.compose(During), set("b,o,m,d,s"));
        assert_eq!(After.compose(During), set("bi,oi,mi,d,f"));
        assert_eq!(Contains.compose(Before), set("b,o,m,di,fi"));
        assert_eq!(Contains.compose(After), set("bi,oi,di,mi,si"));
        assert_eq!(During.compose(Contains), RelationSet::UNIVERSAL);
    }

    #[test]
    fn set_composition() {
        assert_eq!(set("b").compose(set("d")), set("b,o,m,d,s"));
        assert_eq!(set("m").compose(set("m")), set("b"));
        for bits in 1..=0x1FFFu16 {
            let s = RelationSet::from_bits(bits);
            assert_eq!(set("e").compose(s), s);
            assert_eq!(s.compose(set("e")), s);
        }
    }

    #[test]
    fn point_composition() {
        let p = PointRelation::LT;
        assert_eq!(p.compose(PointRelation::LE), PointRelation::LT);
        assert_eq!(PointRelation::LE.compose(p), PointRelation::LT);
        assert_eq!(PointRelation::LE.compose(PointRelation::LE), PointRelation::LE);
        assert_eq!(PointRelation::LT.compose(PointRelation::GT), PointRelation::ALL);
        for q in PointRelation::CONSISTENT {
            assert_eq!(PointRelation::EQ.compose(q), q);
            assert_eq!(q.inverse().inverse(), q);
        }
        assert_eq!(PointRelation::LE.inverse(), PointRelation::GE);
    }

    #[test]
    fn endpoint_mapping() {
        use PointRelation as P;
        assert_eq!(Before.endpoints(), EndpointQuadruple::new(P::LT, P::LT, P::LT, P::LT));
        assert_eq!(Equals.endpoints(), EndpointQuadruple::new(P::EQ, P::EQ, P::LT, P::GT));
        assert_eq!(Starts.endpoints(), EndpointQuadruple::new(P::EQ, P::LT, P::LT, P::GT));
        assert_eq!(set("b,m").endpoints(), EndpointQuadruple::new(P::LT, P::LT, P::LT, P::LE));
        assert_eq!(set("e").endpoints(), Equals.endpoints());
        // bi puts I.begin after J.end and mi makes them equal
        assert_eq!(
            RelationSet::UNIVERSAL.endpoints(),
            EndpointQuadruple::new(P::ALL, P::ALL, P::ALL, P::ALL)
        );
        assert_eq!(
            RelationSet::from_endpoints(EndpointQuadruple::new(P::LT, P::LT, P::LT, P::LT)),
            set("b")
        );
        assert_eq!(
            RelationSet::from_endpoints(EndpointQuadruple::new(P::LT, P::LT, P::LT, P::LE)),
            set("b,m")
        );
        assert_eq!(
            RelationSet::from_endpoints(EndpointQuadruple::new(P::ALL, P::ALL, P::ALL, P::ALL)),
            RelationSet::UNIVERSAL
        );
        // pinning I.begin < J.end rules out exactly bi and mi
        let q = EndpointQuadruple::new(P::ALL, P::ALL, P::LT, P::ALL);
        assert_eq!(RelationSet::from_endpoints(q), set("b,m,o,oi,s,si,d,di,f,fi,e"));
        // (<,<,<,>) together with (=,...) cannot be realised at once
        assert!(RelationSet::from_endpoints(EndpointQuadruple::new(P::EQ, P::LT, P::LT, P::LT))
            .is_empty());
    }

    #[test]
    fn convexity() {
        assert!(set("b,m").is_convex());
        assert!(!set("b,bi").is_convex());
        assert!(RelationSet::UNIVERSAL.is_convex());
        assert!(!RelationSet::EMPTY.is_convex());
        let convex = RelationSet::enumerate_convex();
        assert_eq!(convex.len(), 82);
        for r in BaseRelation::ALL {
            assert!(convex.contains(&RelationSet::single(r)));
        }
    }

    #[test]
    fn canonical_names_round_trip() {
        assert_eq!(set("o,b,m").to_string(), "b,m,o");
        assert_eq!(RelationSet::UNIVERSAL.to_string(), "b,bi,m,mi,o,oi,s,si,d,di,f,fi,e");
        assert!("b,x".parse::<RelationSet>().is_err());
        for bits in 1..=0x1FFFu16 {
            let s = RelationSet::from_bits(bits);
            assert_eq!(s.to_string().parse::<RelationSet>().unwrap(), s);
        }
    }
}
