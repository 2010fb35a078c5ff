//! Folding of finitely-enumerated argument positions into predicate
//! names, turning rules over typed predicates like `h(msg, ag, id)`
//! into monadic rules over predicates like `h_req_a(x)`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::msr::config::{Atom, GroundAtom};
use crate::msr::constraint::{IdConstraint, VarId};
use crate::msr::rule::MsrRule;

/// The type of one argument position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyType {
    /// An identifier from the ordered infinite domain.
    Id,
    /// A value of the named finite enumeration.
    Enum(String),
}

/// Argument position types per predicate. Predicates without an entry
/// are all-identifier with the arity seen at use sites.
pub type PolySig = BTreeMap<String, Vec<PolyType>>;

/// Declared enumerations: name to value list, in declaration order.
pub type Enums = BTreeMap<String, Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyArg {
    Var(VarId),
    Lit(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyAtom {
    pub pred: String,
    pub args: Vec<PolyArg>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRule {
    pub name: String,
    pub lhs: Vec<PolyAtom>,
    pub rhs: Vec<PolyAtom>,
    pub constraint: IdConstraint,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonadizeError {
    #[error("predicate {pred}: argument position {position} uses enumeration {name} which is not declared")]
    UndeclaredEnum {
        pred: String,
        position: usize,
        name: String,
    },
    #[error("rule {rule}: variable is used both as identifier and as enumeration value")]
    MixedVariable { rule: String },
    #[error("rule {rule}: variable is used with two different enumerations")]
    EnumTypeClash { rule: String },
    #[error("rule {rule}: literal {lit} is not a value of enumeration {name}")]
    UnknownEnumValue {
        rule: String,
        lit: String,
        name: String,
    },
    #[error("rule {rule}: literal {lit} appears at an identifier position of {pred}")]
    LiteralAtIdPosition {
        rule: String,
        lit: String,
        pred: String,
    },
    #[error("predicate {pred} stays non-monadic after folding ({arity} identifier positions)")]
    NonMonadic { pred: String, arity: usize },
    #[error("rule {rule}: constraint mentions enumeration variable")]
    ConstraintOnEnumVariable { rule: String },
}

fn types_of<'a>(sig: &'a PolySig, pred: &str, arity: usize) -> std::borrow::Cow<'a, [PolyType]> {
    match sig.get(pred) {
        Some(ts) => std::borrow::Cow::Borrowed(ts.as_slice()),
        None => std::borrow::Cow::Owned(vec![PolyType::Id; arity]),
    }
}

fn check_sig(sig: &PolySig, enums: &Enums) -> Result<(), MonadizeError> {
    for (pred, ts) in sig {
        let id_positions = ts.iter().filter(|t| matches!(t, PolyType::Id)).count();
        for (position, t) in ts.iter().enumerate() {
            if let PolyType::Enum(name) = t {
                if !enums.contains_key(name) {
                    return Err(MonadizeError::UndeclaredEnum {
                        pred: pred.clone(),
                        position,
                        name: name.clone(),
                    });
                }
            }
        }
        if id_positions > 1 {
            return Err(MonadizeError::NonMonadic {
                pred: pred.clone(),
                arity: id_positions,
            });
        }
    }
    Ok(())
}

/// The folded predicate name for fixed enumeration values:
/// `h` with `(req, t)` becomes `h_req_t`.
pub fn folded_name(pred: &str, values: &[&str]) -> String {
    let mut out = pred.to_string();
    for v in values {
        out.push('_');
        out.push_str(v);
    }
    out
}

/// Every predicate name (with its post-fold arity) induced by the
/// signature: the full product of enumeration values per typed
/// predicate, plus untyped predicates untouched.
pub fn folded_predicates(
    sig: &PolySig,
    enums: &Enums,
) -> Result<Vec<(String, usize)>, MonadizeError> {
    check_sig(sig, enums)?;
    let mut out = Vec::new();
    for (pred, ts) in sig {
        let id_arity = ts.iter().filter(|t| matches!(t, PolyType::Id)).count();
        let enum_positions: Vec<&String> = ts
            .iter()
            .filter_map(|t| match t {
                PolyType::Enum(n) => Some(n),
                PolyType::Id => None,
            })
            .collect();
        let mut combos: Vec<Vec<&str>> = vec![vec![]];
        for name in enum_positions {
            let values = &enums[name];
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    values.iter().map(move |v| {
                        let mut c2 = c.clone();
                        c2.push(v.as_str());
                        c2
                    })
                })
                .collect();
        }
        for combo in combos {
            out.push((folded_name(pred, &combo), id_arity));
        }
    }
    Ok(out)
}

/// Expands each rule over all enumeration assignments consistent with
/// its literals and folds enumerated arguments into predicate names.
/// Identifier arguments remain; the output is validated monadic.
pub fn monadize(
    rules: &[PolyRule],
    sig: &PolySig,
    enums: &Enums,
) -> Result<Vec<MsrRule>, MonadizeError> {
    check_sig(sig, enums)?;
    let mut out = Vec::new();
    for rule in rules {
        out.extend(monadize_rule(rule, sig, enums)?);
    }
    Ok(out)
}

fn monadize_rule(
    rule: &PolyRule,
    sig: &PolySig,
    enums: &Enums,
) -> Result<Vec<MsrRule>, MonadizeError> {
    // classify variables by the positions they occupy
    let mut enum_vars: BTreeMap<VarId, String> = BTreeMap::new();
    let mut id_vars: Vec<VarId> = Vec::new();
    for atom in rule.lhs.iter().chain(&rule.rhs) {
        let ts = types_of(sig, &atom.pred, atom.args.len());
        for (arg, t) in atom.args.iter().zip(ts.iter()) {
            match (arg, t) {
                (PolyArg::Var(v), PolyType::Id) => {
                    if enum_vars.contains_key(v) {
                        return Err(MonadizeError::MixedVariable {
                            rule: rule.name.clone(),
                        });
                    }
                    id_vars.push(*v);
                }
                (PolyArg::Var(v), PolyType::Enum(name)) => {
                    if id_vars.contains(v) {
                        return Err(MonadizeError::MixedVariable {
                            rule: rule.name.clone(),
                        });
                    }
                    if let Some(prev) = enum_vars.get(v) {
                        if prev != name {
                            return Err(MonadizeError::EnumTypeClash {
                                rule: rule.name.clone(),
                            });
                        }
                    } else {
                        enum_vars.insert(*v, name.clone());
                    }
                }
                (PolyArg::Lit(l), PolyType::Enum(name)) => {
                    if !enums[name].contains(l) {
                        return Err(MonadizeError::UnknownEnumValue {
                            rule: rule.name.clone(),
                            lit: l.clone(),
                            name: name.clone(),
                        });
                    }
                }
                (PolyArg::Lit(l), PolyType::Id) => {
                    return Err(MonadizeError::LiteralAtIdPosition {
                        rule: rule.name.clone(),
                        lit: l.clone(),
                        pred: atom.pred.clone(),
                    });
                }
            }
        }
    }
    for v in rule.constraint.vars() {
        if enum_vars.contains_key(&v) {
            return Err(MonadizeError::ConstraintOnEnumVariable {
                rule: rule.name.clone(),
            });
        }
    }

    // enumerate assignments of the enumeration variables
    let evars: Vec<(VarId, &Vec<String>)> =
        enum_vars.iter().map(|(v, n)| (*v, &enums[n])).collect();
    let mut assignments: Vec<BTreeMap<VarId, String>> = vec![BTreeMap::new()];
    for (v, values) in &evars {
        assignments = assignments
            .into_iter()
            .flat_map(|a| {
                values.iter().map(move |val| {
                    let mut a2 = a.clone();
                    a2.insert(*v, val.clone());
                    a2
                })
            })
            .collect();
    }

    let mut out = Vec::new();
    for assignment in assignments {
        let fold = |atoms: &[PolyAtom]| -> Result<Vec<Atom>, MonadizeError> {
            atoms
                .iter()
                .map(|atom| {
                    let ts = types_of(sig, &atom.pred, atom.args.len());
                    let mut values: Vec<&str> = Vec::new();
                    let mut args: Vec<VarId> = Vec::new();
                    for (arg, t) in atom.args.iter().zip(ts.iter()) {
                        match (arg, t) {
                            (PolyArg::Var(v), PolyType::Id) => args.push(*v),
                            (PolyArg::Var(v), PolyType::Enum(_)) => values.push(&assignment[v]),
                            (PolyArg::Lit(l), PolyType::Enum(_)) => values.push(l),
                            (PolyArg::Lit(_), PolyType::Id) => unreachable!("checked above"),
                        }
                    }
                    let pred = if values.is_empty() {
                        atom.pred.clone()
                    } else {
                        folded_name(&atom.pred, &values)
                    };
                    if args.len() > 1 {
                        return Err(MonadizeError::NonMonadic {
                            pred,
                            arity: args.len(),
                        });
                    }
                    Ok(Atom::new(pred, args))
                })
                .collect()
        };
        let lhs = fold(&rule.lhs)?;
        let rhs = fold(&rule.rhs)?;
        out.push(MsrRule::new(
            rule.name.clone(),
            lhs,
            rhs,
            rule.constraint.clone(),
        ));
    }
    Ok(out)
}

/// Folds a ground atom over typed positions: enumeration values move
/// into the predicate name, identifiers stay as arguments.
pub fn fold_ground(
    pred: &str,
    args: &[PolyGroundArg],
    sig: &PolySig,
    enums: &Enums,
) -> Result<GroundAtom, MonadizeError> {
    let ts = types_of(sig, pred, args.len());
    let mut values: Vec<&str> = Vec::new();
    let mut ids: Vec<i64> = Vec::new();
    for (arg, t) in args.iter().zip(ts.iter()) {
        match (arg, t) {
            (PolyGroundArg::Id(d), PolyType::Id) => ids.push(*d),
            (PolyGroundArg::Lit(l), PolyType::Enum(name)) => {
                if !enums.get(name).is_some_and(|vs| vs.contains(l)) {
                    return Err(MonadizeError::UnknownEnumValue {
                        rule: String::new(),
                        lit: l.clone(),
                        name: name.clone(),
                    });
                }
                values.push(l);
            }
            (PolyGroundArg::Lit(l), PolyType::Id) => {
                return Err(MonadizeError::LiteralAtIdPosition {
                    rule: String::new(),
                    lit: l.clone(),
                    pred: pred.to_string(),
                });
            }
            (PolyGroundArg::Id(_), PolyType::Enum(name)) => {
                return Err(MonadizeError::UnknownEnumValue {
                    rule: String::new(),
                    lit: "<number>".to_string(),
                    name: name.clone(),
                });
            }
        }
    }
    let pred = if values.is_empty() {
        pred.to_string()
    } else {
        folded_name(pred, &values)
    };
    Ok(GroundAtom::new(pred, ids))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PolyGroundArg {
    Id(i64),
    Lit(String),
}
