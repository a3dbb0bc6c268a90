use std::path::Path;
use std::sync::Arc;

use prismkit_core::base_rings::{parse_polynomial, parse_spec, Precision, RingElem, RingSpec};
use prismkit_core::delta::{DeltaJson, DeltaLift, DeltaRing};
use prismkit_core::hodge_tate::{
    exp_g, integrality_profile, log_g, prismatic_log, star_product, terms_needed, FrobeniusEquation, GroupLawSeries,
};
use prismkit_core::lemma_harness::{check_names, failures, summary_table, Corruption, Harness, HarnessConfig};
use prismkit_core::prism::{
    envelope_points, is_distinguished, CatalogEntry, Eisenstein, EnvelopePresentation, PrismSpec,
};
use prismkit_core::witt::{WittOp, WittPolynomialTable, WittVector};
use serde_json::{json, Value};

use crate::config::Config;
use crate::{
    io, Cli, CliError, Command, DeltaCmd, EnvelopeArgs, Format, HtCmd, Presentation, PrismArgs, PrismCmd, VerifyArgs,
    WittCmd,
};

/// Standard output of a successful run, and how many checks failed.
pub struct Outcome {
    pub stdout: String,
    pub failed: usize,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, failed: 0 }
    }
}

struct Ctx {
    cfg: Config,
    prec: Precision,
    format: Format,
}

impl Ctx {
    /// Data output: compact JSON in both formats unless a text rendering
    /// is given.
    fn emit(&self, value: Value, text: Option<String>) -> Outcome {
        let s = match (self.format, text) {
            (Format::Text, Some(t)) => t,
            _ => serde_json::to_string(&value).expect("value serializes"),
        };
        Outcome::ok(if s.ends_with('\n') { s } else { s + "\n" })
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = cli.global.resolve()?;
    let prec = cfg.precision()?;
    let ctx = Ctx { cfg, prec, format: cli.global.format };
    match &cli.command {
        Command::Witt(c) => witt(&ctx, c),
        Command::Delta(c) => delta(&ctx, c),
        Command::Prism(c) => prism(&ctx, c),
        Command::Ht(c) => ht(&ctx, c),
        Command::Verify(v) => verify(&ctx, v),
    }
}

fn wjson(v: &WittVector) -> Value {
    serde_json::to_value(v.to_json()).expect("serializes")
}

fn ejson(a: &RingElem) -> Value {
    serde_json::to_value(a.to_json()).expect("serializes")
}

fn components(v: &WittVector) -> Value {
    json!(v.components().iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

fn read_vectors(ctx: &Ctx, paths: &[std::path::PathBuf]) -> Result<Vec<WittVector>, CliError> {
    paths
        .iter()
        .map(|p| {
            let v = io::witt(p, ctx.prec)?;
            if ctx.cfg.witt_length_set && ctx.cfg.witt_length < v.len() {
                Ok(v.truncate(ctx.cfg.witt_length)?)
            } else if ctx.cfg.witt_length_set && ctx.cfg.witt_length > v.len() {
                Err(CliError::Domain(prismkit_core::Error::LengthUnderflow(format!(
                    "{} has length {}, --witt-len asks for {}",
                    p.display(),
                    v.len(),
                    ctx.cfg.witt_length
                ))))
            } else {
                Ok(v)
            }
        })
        .collect()
}

fn witt(ctx: &Ctx, cmd: &WittCmd) -> Result<Outcome, CliError> {
    let binary = |inputs: &[std::path::PathBuf], what: &str| -> Result<(WittVector, WittVector), CliError> {
        let v = read_vectors(ctx, io::expect(inputs, 2, what)?)?;
        Ok((v[0].clone(), v[1].clone()))
    };
    let unary = |inputs: &[std::path::PathBuf], what: &str| -> Result<WittVector, CliError> {
        Ok(read_vectors(ctx, io::expect(inputs, 1, what)?)?.remove(0))
    };
    let out = match cmd {
        WittCmd::Add(i) => {
            let (x, y) = binary(&i.inputs, "add")?;
            x.add(&y)?
        }
        WittCmd::Mul(i) => {
            let (x, y) = binary(&i.inputs, "mul")?;
            x.mul(&y)?
        }
        WittCmd::Sub(i) => {
            let (x, y) = binary(&i.inputs, "sub")?;
            x.sub(&y)?
        }
        WittCmd::Neg(i) => unary(&i.inputs, "neg")?.neg()?,
        WittCmd::Ver(i) => unary(&i.inputs, "ver")?.verschiebung(),
        WittCmd::Frob(i) => unary(&i.inputs, "frob")?.frobenius()?,
        WittCmd::Res(i) => unary(&i.inputs, "res")?.restriction()?,
        WittCmd::Teich(i) => {
            let a = io::elem(&io::expect(&i.inputs, 1, "teich")?[0], ctx.prec)?;
            WittVector::teichmuller(&a, ctx.cfg.witt_length)
        }
        WittCmd::Ghost(i) => {
            let x = unary(&i.inputs, "ghost")?;
            let g: Vec<Value> = x.ghost().iter().map(ejson).collect();
            return Ok(ctx.emit(json!(g), None));
        }
        WittCmd::FromGhost(i) => {
            let gs = io::elems(&io::expect(&i.inputs, 1, "from-ghost")?[0], ctx.prec)?;
            let first =
                gs.first().ok_or_else(|| CliError::Usage("from-ghost needs at least one ghost component".into()))?;
            let spec = first.spec().clone();
            let inv = WittVector::from_ghost(&gs, &spec)?;
            let v = json!({ "vector": wjson(&inv.vector), "lost_digits": inv.lost_digits });
            return Ok(ctx.emit(v, None));
        }
        WittCmd::Table { op, max } => {
            let op: WittOp = op.parse()?;
            let table = WittPolynomialTable::shared(ctx.cfg.p)?;
            let mut rows = Vec::new();
            let mut text = String::new();
            for i in 0..=*max {
                let poly = table.get(op, i)?;
                text.push_str(&format!("{}_{i} = {poly}\n", op.name()));
                rows.push(json!({ "op": op.name(), "index": i, "polynomial": ejson(&poly) }));
            }
            return Ok(ctx.emit(json!(rows), Some(text)));
        }
    };
    Ok(ctx.emit(wjson(&out), None))
}

fn presentation(ctx: &Ctx, pres: &Presentation) -> Result<DeltaRing, CliError> {
    if let Some(path) = &pres.presentation {
        let text = io::read(path)?;
        let j: DeltaJson = serde_json::from_str(&text)
            .map_err(|e| CliError::Domain(prismkit_core::Error::Parse(format!("{}: {e}", path.display()))))?;
        return Ok(j.into_ring(ctx.prec)?);
    }
    let base = parse_spec(&pres.base, ctx.prec)?;
    Ok(DeltaRing::free(pres.vars, ctx.cfg.delta_depth, &base)?)
}

fn delta(ctx: &Ctx, cmd: &DeltaCmd) -> Result<Outcome, CliError> {
    match cmd {
        DeltaCmd::Free { pres } => {
            let ring = presentation(ctx, pres)?;
            Ok(ctx.emit(serde_json::to_value(ring.to_json()).expect("serializes"), None))
        }
        DeltaCmd::Apply { pres, inputs } => {
            let ring = presentation(ctx, pres)?;
            let a = io::elem_in(&io::expect(&inputs.inputs, 1, "apply")?[0], ring.carrier())?;
            let d = ring.delta(&a)?;
            Ok(ctx.emit(json!({ "value": ejson(&d.value), "lost_digits": d.lost_digits }), None))
        }
        DeltaCmd::Phi { pres, inputs } => {
            let ring = presentation(ctx, pres)?;
            let a = io::elem_in(&io::expect(&inputs.inputs, 1, "phi")?[0], ring.carrier())?;
            Ok(ctx.emit(ejson(&ring.phi(&a)?), None))
        }
        DeltaCmd::Lift { pres, target, assign, inputs } => {
            let ring = presentation(ctx, pres)?;
            let target = parse_spec(target, ctx.prec)?;
            let assignment = io::elems_in(assign, &target)?;
            let lift = DeltaLift::new(&ring, &target, assignment, ctx.cfg.witt_length)?;
            let gens: Vec<Value> = ring
                .carrier()
                .vars()
                .iter()
                .zip(lift.generator_images())
                .map(|(v, img)| json!({ "generator": v, "image": img.as_ref().map(wjson) }))
                .collect();
            let mut out = json!({ "witt_length": lift.len(), "generators": gens });
            if let Some(path) = inputs.inputs.first() {
                let a = io::elem_in(path, ring.carrier())?;
                out["image"] = wjson(&lift.apply(&a)?);
            }
            Ok(ctx.emit(out, None))
        }
    }
}

fn build_prism(ctx: &Ctx, args: &PrismArgs) -> Result<PrismSpec, CliError> {
    let entry = match args.catalog.as_str() {
        "bk" | "breuil-kisin" => {
            let e =
                args.eisenstein.as_deref().ok_or_else(|| CliError::Usage("--catalog bk needs --eisenstein".into()))?;
            CatalogEntry::BreuilKisin(Eisenstein::parse(e)?)
        }
        other => {
            if args.eisenstein.is_some() {
                return Err(CliError::Usage("--eisenstein only applies to --catalog bk".into()));
            }
            other.parse::<CatalogEntry>().map_err(|e| CliError::Usage(e.to_string()))?
        }
    };
    let prism = PrismSpec::new(&entry, ctx.prec)?;
    match &args.free_vars {
        Some(list) => {
            let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            Ok(prism.with_free_vars(&names, ctx.cfg.delta_depth)?)
        }
        None => Ok(prism),
    }
}

fn envelope(ctx: &Ctx, args: &EnvelopeArgs) -> Result<EnvelopePresentation, CliError> {
    let prism = build_prism(ctx, &args.prism)?;
    let nums = args
        .numerators
        .split(',')
        .map(|s| parse_polynomial(s.trim(), prism.carrier()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EnvelopePresentation::new(&prism, &nums, ctx.cfg.delta_depth)?)
}

fn prism(ctx: &Ctx, cmd: &PrismCmd) -> Result<Outcome, CliError> {
    match cmd {
        PrismCmd::New(args) => {
            let prism = build_prism(ctx, args)?;
            Ok(ctx.emit(serde_json::to_value(prism.to_json()).expect("serializes"), None))
        }
        PrismCmd::Check { prism: args, inputs } => {
            let prism = build_prism(ctx, args)?;
            let d = match inputs.inputs.first() {
                Some(path) => io::elem_in(path, prism.carrier())?,
                None => prism.orientation().clone(),
            };
            let v = is_distinguished(prism.ring(), &d)?;
            let mut text = format!(
                "distinguished: {}\nd = {d} in {}\ndelta(d) is a unit: {}\n",
                v.by_ideal(),
                prism.carrier().id(),
                v.delta_unit
            );
            if let Some((a, b)) = &v.witness {
                text.push_str(&format!("witness: p = a*d + b*phi(d) with a = {a}, b = {b}\n"));
            }
            let value = json!({
                "distinguished": v.by_ideal(),
                "by_delta": v.by_delta(),
                "in_radical": v.in_radical,
                "delta_unit": v.delta_unit,
                "orientation": ejson(&d),
                "witness": v.witness.as_ref().map(|(a, b)| json!({ "a": ejson(a), "b": ejson(b) })),
            });
            Ok(ctx.emit(value, Some(text)))
        }
        PrismCmd::Quotient(args) => {
            let prism = build_prism(ctx, args)?;
            let q = prism.hodge_tate_quotient()?;
            let images: Vec<String> = q.reduction.images().iter().map(|x| x.to_string()).collect();
            let text = format!("{} / ({}) = {}\n", prism.carrier().id(), prism.orientation(), q.spec.id());
            Ok(ctx.emit(json!({ "quotient": q.spec.id(), "orientation": ejson(prism.orientation()), "generator_images": images }), Some(text)))
        }
        PrismCmd::Envelope(args) => {
            let env = envelope(ctx, args)?;
            Ok(ctx.emit(serde_json::to_value(env.to_json()?).expect("serializes"), None))
        }
        PrismCmd::Points { env: args, target, assign } => {
            let env = envelope(ctx, args)?;
            let target = parse_spec(target, ctx.prec)?;
            let base_ring = env.prism().ring();
            let assignment = match assign {
                Some(path) => io::elems_in(path, &target)?,
                None => vec![RingElem::zero(&target); base_ring.carrier().nvars()],
            };
            let base = DeltaLift::new(base_ring, &target, assignment, ctx.cfg.witt_length)?;
            let pts = envelope_points(&env, &base, ctx.cfg.enumeration_budget)?;
            let render = |set: &[Vec<WittVector>]| -> Value {
                json!(set.iter().map(|t| t.iter().map(components).collect::<Vec<_>>()).collect::<Vec<_>>())
            };
            let value = json!({
                "candidates": pts.candidates.to_string(),
                "equal": pts.equal(),
                "set_a": render(&pts.set_a),
                "set_b": render(&pts.set_b),
            });
            let text = format!(
                "candidates: {}\n|A| = {}, |B| = {}\nequal: {}\n",
                pts.candidates,
                pts.set_a.len(),
                pts.set_b.len(),
                pts.equal()
            );
            Ok(ctx.emit(value, Some(text)))
        }
    }
}

fn z_argument(ctx: &Ctx, z: &str) -> Result<RingElem, CliError> {
    if Path::new(z).exists() {
        return io::elem(Path::new(z), ctx.prec);
    }
    let c: i64 =
        z.trim().parse().map_err(|_| CliError::Usage(format!("--z {z:?} is neither a file nor an integer")))?;
    let spec: Arc<RingSpec> = RingSpec::z_mod_pn(ctx.prec)?;
    Ok(RingElem::from_int(&spec, c))
}

fn ht(ctx: &Ctx, cmd: &HtCmd) -> Result<Outcome, CliError> {
    match cmd {
        HtCmd::Solve { ring, n, m } => {
            let r = parse_spec(ring, ctx.prec)?;
            let sol = FrobeniusEquation::new(&r, *n, *m)?.solve(ctx.cfg.enumeration_budget)?;
            let list = |v: &[WittVector]| json!(v.iter().map(components).collect::<Vec<_>>());
            let value = json!({
                "ring": r.id(),
                "n": n,
                "m": m,
                "particular": components(&sol.particular),
                "solutions": list(&sol.solutions),
                "kernel": list(&sol.kernel),
                "torsor": sol.torsor,
            });
            Ok(ctx.emit(value, None))
        }
        HtCmd::Star(i) => {
            let paths = io::expect(&i.inputs, 3, "star (a, b, c)")?;
            let a = io::elem(&paths[0], ctx.prec)?;
            let b = io::elem_in(&paths[1], a.spec())?;
            let c = io::elem_in(&paths[2], a.spec())?;
            Ok(ctx.emit(ejson(&star_product(&a, &b, &c)?), None))
        }
        HtCmd::Grouplaw { eisenstein } => {
            let m = ctx.cfg.series_order;
            let (e, l) = (exp_g(m), log_g(m));
            let x = GroupLawSeries::x(false, m);
            let xb = GroupLawSeries::x(true, m);
            let y = GroupLawSeries::y(m);
            let hom = e.compose(&xb.add(&y)?)? == e.compose(&xb)?.star(&e.compose(&y)?)?;
            let mut value = json!({
                "order": m,
                "exp": e.to_json(),
                "log": l.to_json(),
                "log_exp_identity": l.compose(&e)? == x,
                "exp_log_identity": e.compose(&l)? == x,
                "exp_homomorphism": hom,
            });
            let mut text = format!(
                "exp_G = {e}\nlog_G = {l}\nlog_G(exp_G(x)) = x: {}\nexp_G(log_G(x)) = x: {}\nexp_G(x + y) = exp_G(x) * exp_G(y): {hom}\n",
                value["log_exp_identity"], value["exp_log_identity"]
            );
            if let Some(s) = eisenstein {
                let eis = Eisenstein::parse(s)?;
                let prof = integrality_profile(&eis, ctx.cfg.p, m)?;
                text.push_str(&format!(
                    "E = {eis}: v(E'(pi)) = {}, borderline: {}, all integral: {}\n",
                    prof.derivative_valuation,
                    prof.borderline,
                    prof.all_integral()
                ));
                value["integrality"] = prof.to_json();
            }
            Ok(ctx.emit(value, Some(text)))
        }
        HtCmd::Log { z, terms } => {
            let z = z_argument(ctx, z)?;
            let n = z.spec().digits().unwrap_or(ctx.cfg.padic_digits);
            let k = terms.unwrap_or_else(|| terms_needed(z.spec().p(), n));
            let lg = prismatic_log(&z, k)?;
            Ok(ctx.emit(serde_json::to_value(lg.to_json(&z)).expect("serializes"), None))
        }
    }
}

fn verify(ctx: &Ctx, args: &VerifyArgs) -> Result<Outcome, CliError> {
    if args.target == "list" {
        let names = check_names();
        return Ok(ctx.emit(json!(names), Some(names.join("\n") + "\n")));
    }
    let checks = match args.target.as_str() {
        "all" => None,
        name if check_names().contains(&name) => Some(vec![name.to_string()]),
        name => return Err(CliError::Usage(format!("no check named {name:?}; try `verify list`"))),
    };
    let corruption = if args.negative_control {
        let table = WittPolynomialTable::shared(2)?;
        Some(Corruption { p: 2, op: WittOp::Sum, index: 1, poly: &table.a(1) + &table.b(1) })
    } else {
        None
    };
    let config = HarnessConfig {
        precision: ctx.prec,
        seed: ctx.cfg.seed,
        budget: ctx.cfg.enumeration_budget,
        checks,
        corruption,
    };
    let reports = Harness::new(config)?.run_all();
    let stdout = match ctx.format {
        Format::Json => reports.iter().map(|r| r.to_json_line() + "\n").collect(),
        Format::Text => summary_table(&reports),
    };
    Ok(Outcome { stdout, failed: failures(&reports) })
}
