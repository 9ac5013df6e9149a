//! Circuits built from classified ring outputs.
//!
//! Composition happens at the boolean level: every operator in a circuit is
//! looked up in a [`GateLibrary`] and evaluated by reading the truth column of
//! the ring output that realizes it. The trace records which output served
//! each operator.

use serde::{Deserialize, Serialize};

use super::gates::{classify_column, column_index, GateKind};
use super::{Output, Pump, TruthTable};
use crate::error::{Error, Result};

/// A ring output used as a two-input gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GatePrimitive {
    pub kind: GateKind,
    pub source: String,
    pub column: [bool; 4],
}

impl GatePrimitive {
    pub fn eval(&self, a: bool, b: bool) -> bool {
        self.column[column_index(a, b)]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GateLibrary {
    pub gates: Vec<GatePrimitive>,
}

impl GateLibrary {
    /// Every classified column of the given tables, in table and column order.
    pub fn from_tables(tables: &[TruthTable]) -> Self {
        let gates = tables
            .iter()
            .flat_map(|t| {
                Output::ALL.into_iter().filter_map(move |out| {
                    let column = t.column(out);
                    let kind = classify_column(column);
                    (kind != GateKind::Unclassified).then(|| GatePrimitive {
                        kind,
                        source: format!("ring[pump={}].{}", t.context.name(), out.name()),
                        column,
                    })
                })
            })
            .collect();
        Self { gates }
    }

    /// The unpumped ring as an ideal boolean device: `H_I`/`H_R1` as OR,
    /// `H_II`/`H_R2` as XOR and `L_z` as AND.
    pub fn ideal() -> Self {
        let ctx = Pump::None.name();
        let mk = |kind: GateKind, out: Output| GatePrimitive {
            kind,
            source: format!("ring[pump={ctx}].{}", out.name()),
            column: kind.column().unwrap(),
        };
        Self {
            gates: vec![
                mk(GateKind::Or, Output::HI),
                mk(GateKind::Xor, Output::HII),
                mk(GateKind::Or, Output::HR1),
                mk(GateKind::Xor, Output::HR2),
                mk(GateKind::And, Output::Lz),
            ],
        }
    }

    pub fn get(&self, kind: GateKind) -> Result<&GatePrimitive> {
        self.gates.iter().find(|g| g.kind == kind).ok_or(Error::MissingGate(kind))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub gate: GateKind,
    pub inputs: [bool; 2],
    pub output: bool,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitTrace {
    pub circuit: String,
    pub inputs: Vec<bool>,
    pub outputs: Vec<bool>,
    pub steps: Vec<TraceStep>,
}

struct Evaluator<'a> {
    library: &'a GateLibrary,
    steps: Vec<TraceStep>,
}

impl<'a> Evaluator<'a> {
    fn new(library: &'a GateLibrary) -> Self {
        Self { library, steps: Vec::new() }
    }

    fn apply(&mut self, gate: GateKind, a: bool, b: bool) -> Result<bool> {
        let prim = self.library.get(gate)?;
        let output = prim.eval(a, b);
        self.steps.push(TraceStep { gate, inputs: [a, b], output, source: prim.source.clone() });
        Ok(output)
    }

    fn finish(self, circuit: &str, inputs: Vec<bool>, outputs: Vec<bool>) -> CircuitTrace {
        CircuitTrace { circuit: circuit.to_string(), inputs, outputs, steps: self.steps }
    }
}

/// `(sum, carry) = (a XOR b, a AND b)`.
pub fn half_adder(library: &GateLibrary, a: bool, b: bool) -> Result<CircuitTrace> {
    let mut ev = Evaluator::new(library);
    let sum = ev.apply(GateKind::Xor, a, b)?;
    let carry = ev.apply(GateKind::And, a, b)?;
    Ok(ev.finish("half_adder", vec![a, b], vec![sum, carry]))
}

/// Two half adders and an OR.
pub fn full_adder(library: &GateLibrary, a: bool, b: bool, cin: bool) -> Result<CircuitTrace> {
    let mut ev = Evaluator::new(library);
    let partial = ev.apply(GateKind::Xor, a, b)?;
    let carry_ab = ev.apply(GateKind::And, a, b)?;
    let sum = ev.apply(GateKind::Xor, partial, cin)?;
    let carry_c = ev.apply(GateKind::And, partial, cin)?;
    let cout = ev.apply(GateKind::Or, carry_ab, carry_c)?;
    Ok(ev.finish("full_adder", vec![a, b, cin], vec![sum, cout]))
}

/// `(a, b, c XOR (a AND b))`.
pub fn toffoli(library: &GateLibrary, a: bool, b: bool, c: bool) -> Result<CircuitTrace> {
    let mut ev = Evaluator::new(library);
    let both = ev.apply(GateKind::And, a, b)?;
    let target = ev.apply(GateKind::Xor, c, both)?;
    Ok(ev.finish("toffoli", vec![a, b, c], vec![a, b, target]))
}
