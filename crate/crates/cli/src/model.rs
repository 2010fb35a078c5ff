//! The surface form of `.hcov` model files, its renderer, and the
//! conversion into core structures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use hcov_core::history::{Event, History, LogMode};
use hcov_core::msr::{
    fold_ground, folded_predicates, monadize, Atom, ConstrainedConfig, Enums, GroundConfig,
    IdConstraint, MsrSystem, PolyArg, PolyAtom, PolyGroundArg, PolyRule, PolySig, PolyType, VarId,
};
use hcov_core::petri::{HConfig, Marking, PetriNetH, Transition};
use hcov_core::wqo::Multiset;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Petri,
    Msr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumDecl {
    pub name: String,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PredSig {
    /// `name/arity`: every position is an identifier.
    Arity(usize),
    /// `name(type, ...)`: each position is `id` or an enumeration name.
    Typed(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredDecl {
    pub name: String,
    pub sig: PredSig,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransDecl {
    pub name: String,
    pub pre: Vec<String>,
    pub post: Vec<String>,
    pub event: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawTerm {
    /// Uppercase identifier.
    Var(String),
    /// `_`, a fresh anonymous variable.
    Wildcard,
    /// Lowercase identifier: an enumeration literal.
    Sym(String),
    /// A concrete identifier.
    Num(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawAtom {
    pub pred: String,
    pub args: Vec<RawTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawConstraintAtom {
    Lt(String, String),
    Eq(String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleDecl {
    pub name: String,
    pub lhs: Vec<RawAtom>,
    pub rhs: Vec<RawAtom>,
    /// Empty means `true`.
    pub constraint: Vec<RawConstraintAtom>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InitDecl {
    /// Petri: `init: p:2, q`.
    Marking(Vec<(String, u32)>),
    /// Msr: `init: c1(1), hc(1), ok`.
    Atoms(Vec<RawAtom>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HistorySpec {
    Word(Vec<String>),
    Bag(Vec<(String, u32)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetBody {
    Petri {
        marking: Vec<(String, u32)>,
        history: Option<HistorySpec>,
    },
    Msr {
        atoms: Vec<RawAtom>,
        constraint: Vec<RawConstraintAtom>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetDecl {
    pub name: String,
    pub body: TargetBody,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelFile {
    pub kind: ModelKind,
    pub places: Vec<String>,
    pub events: Vec<String>,
    pub log_mode: Option<LogMode>,
    pub enums: Vec<EnumDecl>,
    pub preds: Vec<PredDecl>,
    pub transitions: Vec<TransDecl>,
    pub rules: Vec<RuleDecl>,
    pub inits: Vec<InitDecl>,
    pub targets: Vec<TargetDecl>,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("unknown target {0}")]
    UnknownTarget(String),
    #[error("duplicate target {0}")]
    DuplicateTarget(String),
    #[error("unknown symbol {symbol} in {context}")]
    UnknownSymbol { symbol: String, context: String },
    #[error("{pred} used with {found} arguments but declared with {declared} in {context}")]
    ArityMismatch {
        pred: String,
        declared: usize,
        found: usize,
        context: String,
    },
    #[error("constraint variable {var} does not occur in the atoms of {context}")]
    FreeConstraintVariable { var: String, context: String },
    #[error("{context}: {message}")]
    Invalid { context: String, message: String },
    #[error("history mode of target {target} does not match the net's log mode")]
    TargetModeMismatch { target: String },
    #[error(transparent)]
    Monadize(#[from] hcov_core::msr::MonadizeError),
    #[error(transparent)]
    Petri(#[from] hcov_core::petri::PetriError),
}

/// A Petri model lowered to core structures.
pub struct PetriProgram {
    pub net: PetriNetH,
    pub targets: Vec<(String, HConfig)>,
}

/// An MSR model lowered to core structures: rules monadized, initial
/// configurations ground, targets symbolic.
pub struct MsrProgram {
    pub system: MsrSystem,
    pub initials: Vec<GroundConfig>,
    pub targets: Vec<(String, ConstrainedConfig)>,
}

impl ModelFile {
    pub fn target_names(&self) -> Vec<&str> {
        self.targets.iter().map(|t| t.name.as_str()).collect()
    }

    fn check_unique_targets(&self) -> Result<(), ModelError> {
        let mut seen = BTreeSet::new();
        for t in &self.targets {
            if !seen.insert(&t.name) {
                return Err(ModelError::DuplicateTarget(t.name.clone()));
            }
        }
        Ok(())
    }

    /// Lowers a `system petri` file.
    pub fn to_petri(&self) -> Result<PetriProgram, ModelError> {
        assert_eq!(self.kind, ModelKind::Petri);
        self.check_unique_targets()?;
        let log_mode = self.log_mode.unwrap_or(LogMode::Word);
        let places: BTreeSet<String> = self.places.iter().cloned().collect();
        let events: BTreeSet<String> = self.events.iter().cloned().collect();
        let transitions: Vec<Transition> = self
            .transitions
            .iter()
            .map(|t| Transition {
                name: t.name.clone(),
                pre: t.pre.iter().cloned().collect(),
                post: t.post.iter().cloned().collect(),
                event: Event::new(t.event.clone()),
            })
            .collect();
        let mut initial: Marking = Multiset::new();
        match self.inits.as_slice() {
            [InitDecl::Marking(pairs)] => {
                for (p, c) in pairs {
                    initial.insert(p.clone(), *c);
                }
            }
            [] => {}
            [InitDecl::Atoms(_)] => {
                return Err(ModelError::Invalid {
                    context: "init".into(),
                    message: "petri initial configurations are markings".into(),
                })
            }
            _ => {
                return Err(ModelError::Invalid {
                    context: "init".into(),
                    message: "a petri model has a single initial marking".into(),
                })
            }
        }
        let net = PetriNetH::new(places, events, transitions, initial, log_mode)?;

        let mut targets = Vec::new();
        for t in &self.targets {
            let TargetBody::Petri { marking, history } = &t.body else {
                return Err(ModelError::Invalid {
                    context: format!("target {}", t.name),
                    message: "expected a petri target (marking/history)".into(),
                });
            };
            let mut m: Marking = Multiset::new();
            for (p, c) in marking {
                if !net.places().contains(p) {
                    return Err(ModelError::UnknownSymbol {
                        symbol: p.clone(),
                        context: format!("target {}", t.name),
                    });
                }
                m.insert(p.clone(), *c);
            }
            let h = match history {
                None => History::empty(log_mode),
                Some(HistorySpec::Word(events)) => {
                    if log_mode != LogMode::Word {
                        return Err(ModelError::TargetModeMismatch {
                            target: t.name.clone(),
                        });
                    }
                    for e in events {
                        if !net.events().contains(e) {
                            return Err(ModelError::UnknownSymbol {
                                symbol: e.clone(),
                                context: format!("target {}", t.name),
                            });
                        }
                    }
                    History::Word(events.iter().map(Event::new).collect())
                }
                Some(HistorySpec::Bag(pairs)) => {
                    if log_mode != LogMode::Bag {
                        return Err(ModelError::TargetModeMismatch {
                            target: t.name.clone(),
                        });
                    }
                    let mut bag = Multiset::new();
                    for (e, c) in pairs {
                        if !net.events().contains(e) {
                            return Err(ModelError::UnknownSymbol {
                                symbol: e.clone(),
                                context: format!("target {}", t.name),
                            });
                        }
                        bag.insert(Event::new(e.clone()), *c);
                    }
                    History::Bag(bag)
                }
            };
            targets.push((t.name.clone(), HConfig::new(m, h)));
        }
        Ok(PetriProgram { net, targets })
    }

    fn enums(&self) -> Enums {
        self.enums
            .iter()
            .map(|e| (e.name.clone(), e.values.clone()))
            .collect()
    }

    fn poly_sig(&self) -> PolySig {
        self.preds
            .iter()
            .filter_map(|p| match &p.sig {
                PredSig::Typed(types) => Some((
                    p.name.clone(),
                    types
                        .iter()
                        .map(|t| {
                            if t == "id" {
                                PolyType::Id
                            } else {
                                PolyType::Enum(t.clone())
                            }
                        })
                        .collect(),
                )),
                PredSig::Arity(_) => None,
            })
            .collect()
    }

    /// The predicate table after monadization: plain declarations plus
    /// the folded product of every typed declaration.
    fn monadic_preds(&self) -> Result<BTreeMap<String, usize>, ModelError> {
        let mut out = BTreeMap::new();
        for p in &self.preds {
            if let PredSig::Arity(n) = p.sig {
                out.insert(p.name.clone(), n);
            }
        }
        for (name, arity) in folded_predicates(&self.poly_sig(), &self.enums())? {
            out.insert(name, arity);
        }
        Ok(out)
    }

    fn raw_arity(&self, pred: &str) -> Option<usize> {
        self.preds
            .iter()
            .find(|p| p.name == pred)
            .map(|p| match &p.sig {
                PredSig::Arity(n) => *n,
                PredSig::Typed(ts) => ts.len(),
            })
    }

    /// Lowers a `system msr` file, monadizing typed predicates.
    pub fn to_msr(&self) -> Result<MsrProgram, ModelError> {
        assert_eq!(self.kind, ModelKind::Msr);
        self.check_unique_targets()?;
        let sig = self.poly_sig();
        let enums = self.enums();

        // rules: raw atoms to poly atoms with rule-local variables
        let mut poly_rules = Vec::new();
        for rule in &self.rules {
            let context = format!("rule {}", rule.name);
            let mut vars: BTreeMap<String, VarId> = BTreeMap::new();
            let mut next = 0u32;
            let convert_atoms = |atoms: &[RawAtom],
                                 vars: &mut BTreeMap<String, VarId>,
                                 next: &mut u32|
             -> Result<Vec<PolyAtom>, ModelError> {
                atoms
                    .iter()
                    .map(|a| {
                        let declared =
                            self.raw_arity(&a.pred)
                                .ok_or_else(|| ModelError::UnknownSymbol {
                                    symbol: a.pred.clone(),
                                    context: context.clone(),
                                })?;
                        if declared != a.args.len() {
                            return Err(ModelError::ArityMismatch {
                                pred: a.pred.clone(),
                                declared,
                                found: a.args.len(),
                                context: context.clone(),
                            });
                        }
                        let args = a
                            .args
                            .iter()
                            .map(|t| match t {
                                RawTerm::Var(n) => {
                                    let v = *vars.entry(n.clone()).or_insert_with(|| {
                                        let v = VarId(*next);
                                        *next += 1;
                                        v
                                    });
                                    Ok(PolyArg::Var(v))
                                }
                                RawTerm::Wildcard => {
                                    let v = VarId(*next);
                                    *next += 1;
                                    Ok(PolyArg::Var(v))
                                }
                                RawTerm::Sym(s) => Ok(PolyArg::Lit(s.clone())),
                                RawTerm::Num(_) => Err(ModelError::Invalid {
                                    context: context.clone(),
                                    message: "concrete identifiers are not allowed in rules".into(),
                                }),
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(PolyAtom {
                            pred: a.pred.clone(),
                            args,
                        })
                    })
                    .collect()
            };
            let lhs = convert_atoms(&rule.lhs, &mut vars, &mut next)?;
            let rhs = convert_atoms(&rule.rhs, &mut vars, &mut next)?;
            let constraint = lower_constraint(&rule.constraint, &vars, &context)?;
            poly_rules.push(PolyRule {
                name: rule.name.clone(),
                lhs,
                rhs,
                constraint,
            });
        }
        let rules = monadize(&poly_rules, &sig, &enums)?;
        let system = MsrSystem::new(rules);

        // initial configurations: ground atoms, typed positions folded
        let mut initials = Vec::new();
        for init in &self.inits {
            let InitDecl::Atoms(atoms) = init else {
                return Err(ModelError::Invalid {
                    context: "init".into(),
                    message: "msr initial configurations are ground atom lists".into(),
                });
            };
            let mut config = GroundConfig::new();
            for a in atoms {
                let declared =
                    self.raw_arity(&a.pred)
                        .ok_or_else(|| ModelError::UnknownSymbol {
                            symbol: a.pred.clone(),
                            context: "init".into(),
                        })?;
                if declared != a.args.len() {
                    return Err(ModelError::ArityMismatch {
                        pred: a.pred.clone(),
                        declared,
                        found: a.args.len(),
                        context: "init".into(),
                    });
                }
                let args = a
                    .args
                    .iter()
                    .map(|t| match t {
                        RawTerm::Num(d) => Ok(PolyGroundArg::Id(*d)),
                        RawTerm::Sym(s) => Ok(PolyGroundArg::Lit(s.clone())),
                        _ => Err(ModelError::Invalid {
                            context: "init".into(),
                            message: "initial configurations must be ground".into(),
                        }),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                config.insert(fold_ground(&a.pred, &args, &sig, &enums)?, 1);
            }
            initials.push(config);
        }

        // targets: monadic (possibly folded) predicate names
        let monadic = self.monadic_preds()?;
        let mut targets = Vec::new();
        for t in &self.targets {
            let context = format!("target {}", t.name);
            let TargetBody::Msr { atoms, constraint } = &t.body else {
                return Err(ModelError::Invalid {
                    context,
                    message: "expected an msr target ([atoms] : {constraint})".into(),
                });
            };
            let mut vars: BTreeMap<String, VarId> = BTreeMap::new();
            let mut next = 0u32;
            let mut core_atoms = Vec::new();
            for a in atoms {
                let declared = *monadic
                    .get(&a.pred)
                    .ok_or_else(|| ModelError::UnknownSymbol {
                        symbol: a.pred.clone(),
                        context: context.clone(),
                    })?;
                if declared != a.args.len() {
                    return Err(ModelError::ArityMismatch {
                        pred: a.pred.clone(),
                        declared,
                        found: a.args.len(),
                        context: context.clone(),
                    });
                }
                let args = a
                    .args
                    .iter()
                    .map(|term| match term {
                        RawTerm::Var(n) => Ok(*vars.entry(n.clone()).or_insert_with(|| {
                            let v = VarId(next);
                            next += 1;
                            v
                        })),
                        RawTerm::Wildcard => {
                            let v = VarId(next);
                            next += 1;
                            Ok(v)
                        }
                        _ => Err(ModelError::Invalid {
                            context: context.clone(),
                            message: "target arguments are variables".into(),
                        }),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                core_atoms.push(Atom::new(a.pred.clone(), args));
            }
            let c = lower_constraint(constraint, &vars, &context)?;
            let Some(config) = ConstrainedConfig::new(core_atoms, c) else {
                return Err(ModelError::Invalid {
                    context,
                    message: "target constraint is unsatisfiable".into(),
                });
            };
            targets.push((t.name.clone(), config));
        }

        Ok(MsrProgram {
            system,
            initials,
            targets,
        })
    }
}

fn lower_constraint(
    atoms: &[RawConstraintAtom],
    vars: &BTreeMap<String, VarId>,
    context: &str,
) -> Result<IdConstraint, ModelError> {
    let lookup = |n: &String| -> Result<VarId, ModelError> {
        vars.get(n)
            .copied()
            .ok_or_else(|| ModelError::FreeConstraintVariable {
                var: n.clone(),
                context: context.to_string(),
            })
    };
    let mut eqs = Vec::new();
    let mut gaps = Vec::new();
    for a in atoms {
        match a {
            RawConstraintAtom::Eq(x, y) => eqs.push((lookup(x)?, lookup(y)?)),
            RawConstraintAtom::Lt(x, y) => gaps.push((lookup(x)?, lookup(y)?, 0)),
        }
    }
    Ok(IdConstraint::from_atoms(&eqs, &gaps))
}

/// The timestamp encoding of a Petri net with history: each transition
/// `Pre -> Post emit e` becomes the rule
/// `Pre, time(T) -> Post, time(T2), h_e(T) where T < T2`, word targets
/// become ordered timestamp queries, and the initial marking gains
/// `time(0)`.
pub fn encode_time(model: &ModelFile) -> Result<ModelFile, ModelError> {
    assert_eq!(model.kind, ModelKind::Petri);
    let log_mode = model.log_mode.unwrap_or(LogMode::Word);
    let mut preds: Vec<PredDecl> = model
        .places
        .iter()
        .map(|p| PredDecl {
            name: p.clone(),
            sig: PredSig::Arity(0),
        })
        .collect();
    preds.push(PredDecl {
        name: "time".into(),
        sig: PredSig::Arity(1),
    });
    for e in &model.events {
        preds.push(PredDecl {
            name: format!("h_{e}"),
            sig: PredSig::Arity(1),
        });
    }

    let rules = model
        .transitions
        .iter()
        .map(|t| {
            let place_atoms = |places: &[String]| -> Vec<RawAtom> {
                places
                    .iter()
                    .map(|p| RawAtom {
                        pred: p.clone(),
                        args: vec![],
                    })
                    .collect()
            };
            let mut lhs = place_atoms(&t.pre);
            lhs.push(RawAtom {
                pred: "time".into(),
                args: vec![RawTerm::Var("T".into())],
            });
            let mut rhs = place_atoms(&t.post);
            rhs.push(RawAtom {
                pred: "time".into(),
                args: vec![RawTerm::Var("T2".into())],
            });
            rhs.push(RawAtom {
                pred: format!("h_{}", t.event),
                args: vec![RawTerm::Var("T".into())],
            });
            RuleDecl {
                name: t.name.clone(),
                lhs,
                rhs,
                constraint: vec![RawConstraintAtom::Lt("T".into(), "T2".into())],
            }
        })
        .collect();

    let inits = model
        .inits
        .iter()
        .map(|init| {
            let InitDecl::Marking(pairs) = init else {
                return Err(ModelError::Invalid {
                    context: "init".into(),
                    message: "petri initial configurations are markings".into(),
                });
            };
            let mut atoms = Vec::new();
            for (p, c) in pairs {
                for _ in 0..*c {
                    atoms.push(RawAtom {
                        pred: p.clone(),
                        args: vec![],
                    });
                }
            }
            atoms.push(RawAtom {
                pred: "time".into(),
                args: vec![RawTerm::Num(0)],
            });
            Ok(InitDecl::Atoms(atoms))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let targets = model
        .targets
        .iter()
        .map(|t| {
            let TargetBody::Petri { marking, history } = &t.body else {
                return Err(ModelError::Invalid {
                    context: format!("target {}", t.name),
                    message: "expected a petri target".into(),
                });
            };
            let mut atoms = Vec::new();
            for (p, c) in marking {
                for _ in 0..*c {
                    atoms.push(RawAtom {
                        pred: p.clone(),
                        args: vec![],
                    });
                }
            }
            let mut constraint = Vec::new();
            match history {
                None => {}
                Some(HistorySpec::Word(events)) => {
                    if log_mode != LogMode::Word {
                        return Err(ModelError::TargetModeMismatch {
                            target: t.name.clone(),
                        });
                    }
                    // the word is most-recent-first; timestamps increase
                    // from oldest to newest
                    let oldest_first: Vec<&String> = events.iter().rev().collect();
                    for (i, e) in oldest_first.iter().enumerate() {
                        atoms.push(RawAtom {
                            pred: format!("h_{e}"),
                            args: vec![RawTerm::Var(format!("X{}", i + 1))],
                        });
                        if i > 0 {
                            constraint.push(RawConstraintAtom::Lt(
                                format!("X{i}"),
                                format!("X{}", i + 1),
                            ));
                        }
                    }
                }
                Some(HistorySpec::Bag(pairs)) => {
                    if log_mode != LogMode::Bag {
                        return Err(ModelError::TargetModeMismatch {
                            target: t.name.clone(),
                        });
                    }
                    let mut i = 0;
                    for (e, c) in pairs {
                        for _ in 0..*c {
                            i += 1;
                            atoms.push(RawAtom {
                                pred: format!("h_{e}"),
                                args: vec![RawTerm::Var(format!("X{i}"))],
                            });
                        }
                    }
                }
            }
            Ok(TargetDecl {
                name: t.name.clone(),
                body: TargetBody::Msr { atoms, constraint },
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(ModelFile {
        kind: ModelKind::Msr,
        places: vec![],
        events: vec![],
        log_mode: None,
        enums: vec![],
        preds,
        transitions: vec![],
        rules,
        inits,
        targets,
    })
}

/// Renders a model back to its file syntax. `parse(render(m))` is
/// structurally equal to `m`.
pub fn render(model: &ModelFile) -> String {
    let mut out = String::new();
    match model.kind {
        ModelKind::Petri => out.push_str("system petri\n"),
        ModelKind::Msr => out.push_str("system msr\n"),
    }
    if !model.places.is_empty() {
        let _ = writeln!(out, "places {}", model.places.join(" "));
    }
    if !model.events.is_empty() {
        let _ = writeln!(out, "events {}", model.events.join(" "));
    }
    if let Some(mode) = model.log_mode {
        let _ = writeln!(out, "logmode {mode}");
    }
    for e in &model.enums {
        let _ = writeln!(out, "enum {} {{ {} }}", e.name, e.values.join(" "));
    }
    for p in &model.preds {
        match &p.sig {
            PredSig::Arity(n) => {
                let _ = writeln!(out, "pred {}/{}", p.name, n);
            }
            PredSig::Typed(ts) => {
                let _ = writeln!(out, "pred {}({})", p.name, ts.join(", "));
            }
        }
    }
    for t in &model.transitions {
        let _ = writeln!(
            out,
            "trans {}: pre {} -> post {} emit {}",
            t.name,
            t.pre.join(", "),
            t.post.join(", "),
            t.event
        );
    }
    for r in &model.rules {
        let _ = writeln!(
            out,
            "rule {}: {} -> {} where {}",
            r.name,
            render_atoms(&r.lhs),
            render_atoms(&r.rhs),
            render_constraint(&r.constraint)
        );
    }
    for init in &model.inits {
        match init {
            InitDecl::Marking(pairs) => {
                let parts: Vec<String> = pairs.iter().map(|(p, c)| format!("{p}:{c}")).collect();
                let _ = writeln!(out, "init: {}", parts.join(", "));
            }
            InitDecl::Atoms(atoms) => {
                let _ = writeln!(out, "init: {}", render_atoms(atoms));
            }
        }
    }
    for t in &model.targets {
        match &t.body {
            TargetBody::Petri { marking, history } => {
                let parts: Vec<String> = marking.iter().map(|(p, c)| format!("{p}:{c}")).collect();
                let _ = write!(out, "target {}: marking {}", t.name, parts.join(", "));
                match history {
                    None => {}
                    Some(HistorySpec::Word(events)) => {
                        let _ = write!(out, " ; history word {}", events.join(" "));
                    }
                    Some(HistorySpec::Bag(pairs)) => {
                        let parts: Vec<String> =
                            pairs.iter().map(|(e, c)| format!("{e}:{c}")).collect();
                        let _ = write!(out, " ; history bag {}", parts.join(" "));
                    }
                }
                out.push('\n');
            }
            TargetBody::Msr { atoms, constraint } => {
                let _ = writeln!(
                    out,
                    "target {}: [{}] : {{{}}}",
                    t.name,
                    render_atoms(atoms),
                    render_constraint_atoms(constraint)
                );
            }
        }
    }
    out
}

fn render_atoms(atoms: &[RawAtom]) -> String {
    let parts: Vec<String> = atoms
        .iter()
        .map(|a| {
            if a.args.is_empty() {
                a.pred.clone()
            } else {
                let args: Vec<String> = a
                    .args
                    .iter()
                    .map(|t| match t {
                        RawTerm::Var(n) => n.clone(),
                        RawTerm::Wildcard => "_".into(),
                        RawTerm::Sym(s) => s.clone(),
                        RawTerm::Num(d) => d.to_string(),
                    })
                    .collect();
                format!("{}({})", a.pred, args.join(", "))
            }
        })
        .collect();
    parts.join(", ")
}

fn render_constraint_atoms(atoms: &[RawConstraintAtom]) -> String {
    let parts: Vec<String> = atoms
        .iter()
        .map(|a| match a {
            RawConstraintAtom::Lt(x, y) => format!("{x} < {y}"),
            RawConstraintAtom::Eq(x, y) => format!("{x} = {y}"),
        })
        .collect();
    parts.join(", ")
}

fn render_constraint(atoms: &[RawConstraintAtom]) -> String {
    if atoms.is_empty() {
        "true".to_string()
    } else {
        render_constraint_atoms(atoms)
    }
}
