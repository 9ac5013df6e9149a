use serde::{Deserialize, Serialize};
use std::fmt;

/// Name of a two-input boolean column.
///
/// Columns are ordered by the inputs `00, 10, 01, 11` (`E_x E_y`). The eight
/// columns that treat both inputs alike carry a name; the eight that depend on
/// which input is set are `Unclassified`.
///
/// `Buffer` and `Reset` follow the nanoring-logic usage for the constant-1 and
/// constant-0 columns, not the usual single-input buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    Reset,
    And,
    Xor,
    Or,
    Nor,
    Xnor,
    Nand,
    Buffer,
    Unclassified,
}

impl GateKind {
    pub const NAMED: [GateKind; 8] = [
        GateKind::Reset,
        GateKind::And,
        GateKind::Xor,
        GateKind::Or,
        GateKind::Nor,
        GateKind::Xnor,
        GateKind::Nand,
        GateKind::Buffer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Reset => "RESET",
            GateKind::And => "AND",
            GateKind::Xor => "XOR",
            GateKind::Or => "OR",
            GateKind::Nor => "NOR",
            GateKind::Xnor => "XNOR",
            GateKind::Nand => "NAND",
            GateKind::Buffer => "BUFFER",
            GateKind::Unclassified => "UNCLASSIFIED",
        }
    }

    /// Truth column of a named gate.
    pub fn column(self) -> Option<[bool; 4]> {
        let f: fn(bool, bool) -> bool = match self {
            GateKind::Reset => |_, _| false,
            GateKind::And => |a, b| a && b,
            GateKind::Xor => |a, b| a ^ b,
            GateKind::Or => |a, b| a || b,
            GateKind::Nor => |a, b| !(a || b),
            GateKind::Xnor => |a, b| !(a ^ b),
            GateKind::Nand => |a, b| !(a && b),
            GateKind::Buffer => |_, _| true,
            GateKind::Unclassified => return None,
        };
        Some([f(false, false), f(true, false), f(false, true), f(true, true)])
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Position of `(a, b)` in a column ordered `00, 10, 01, 11`.
pub fn column_index(a: bool, b: bool) -> usize {
    a as usize + 2 * b as usize
}

pub fn classify_column(column: [bool; 4]) -> GateKind {
    // symmetric in the two inputs iff rows 10 and 01 agree
    if column[1] != column[2] {
        return GateKind::Unclassified;
    }
    match (column[0], column[1], column[3]) {
        (false, false, false) => GateKind::Reset,
        (false, false, true) => GateKind::And,
        (false, true, false) => GateKind::Xor,
        (false, true, true) => GateKind::Or,
        (true, false, false) => GateKind::Nor,
        (true, false, true) => GateKind::Xnor,
        (true, true, false) => GateKind::Nand,
        (true, true, true) => GateKind::Buffer,
    }
}
