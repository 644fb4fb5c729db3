// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use polychain::flatnorm::{flat_norm, flat_norm_mod_p, SearchOptions};
use polychain::generate::{
    parallel_bundle, path_graph, random_grid, random_one_chain, FixtureRng, RandomChainParams,
};
use polychain::io::{
    to_json, CertificateDocument, ChainDocument, ChainEntry, FlatNormDocument, GridDocument,
};
use polychain::modp::{exact_pmass, integer_pmass, pmass, support_mod_p};
use polychain::rational::{format_rational, parse_rational};
use polychain::{
    check_prop_sn, cone, equiv_mod_p, repair, select_representative, verify_repair, zero_sum_check,
    GeometricComplex, IntegerChain, Modulus,
};
use serde_json::{json, Value};

use crate::{ChainInput, CliError, Command, GenKind, Outcome};

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: polychain::Result<T>) -> CliResult<T> {
    r.map_err(|e| match e {
        polychain::Error::Internal(_) => CliError::Internal(e.to_string()),
        _ => CliError::Usage(format!("{}: {e}", path.display())),
    })
}

fn modulus(p: i64) -> CliResult<Modulus> {
    Modulus::new(p).map_err(|e| CliError::Usage(e.to_string()))
}

struct Loaded {
    doc: ChainDocument,
    complex: Arc<GeometricComplex>,
    name: String,
    chain: IntegerChain,
}

fn load(path: &Path, name: Option<&str>) -> CliResult<Loaded> {
    let doc = in_file(path, ChainDocument::parse(&read(path)?))?;
    let complex = Arc::new(in_file(path, doc.complex())?);
    let chain = in_file(path, doc.chain(name, complex.clone()))?;
    let name = match name {
        Some(n) => n.to_string(),
        None => doc.chains.keys().next().cloned().unwrap_or_default(),
    };
    Ok(Loaded {
        doc,
        complex,
        name,
        chain,
    })
}

fn load_input(input: &ChainInput) -> CliResult<Loaded> {
    load(&input.input, input.chain.as_deref())
}

/// Writes `text` to `out`, or returns it for stdout.
fn emit(out: Option<&PathBuf>, text: String) -> CliResult<Option<String>> {
    match out {
        Some(path) => write(path, &text).map(|_| None),
        None => Ok(Some(text)),
    }
}

fn ok(report: Value, text: String) -> CliResult<Outcome> {
    Ok(Outcome {
        code: 0,
        report,
        text,
    })
}

fn coeff_list(chain: &IntegerChain) -> String {
    let parts: Vec<String> = chain.iter().map(|(c, v)| format!("{c}:{v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn dispatch(command: Command) -> CliResult<Outcome> {
    match command {
        Command::Select { p, input, out } => {
            let p = modulus(p)?;
            let l = load_input(&input)?;
            let sel = select_representative(&l.chain, p);
            let doc = ChainDocument::from_complex(&l.complex).with_chain(&l.name, &sel);
            let printed = emit(out.as_ref(), doc.to_json())?;
            ok(
                json!({ "command": "select", "p": p.get(), "chain": ChainEntry::from_chain(&sel) }),
                printed.unwrap_or_else(|| format!("select {}", coeff_list(&sel))),
            )
        }
        Command::Pmass { p, input } => {
            let p = modulus(p)?;
            let l = load_input(&input)?;
            let exact = exact_pmass(&l.chain, p).map(|v| format_rational(&v));
            let value = pmass(&l.chain, p);
            let support: Vec<usize> = support_mod_p(&l.chain, p).into_iter().collect();
            let text = format!(
                "p-mass {}",
                exact.clone().unwrap_or_else(|| value.to_string())
            );
            ok(
                json!({
                    "command": "pmass",
                    "p": p.get(),
                    "degree": l.chain.degree().as_u8(),
                    "pmass": value,
                    "pmass_exact": exact,
                    "integer_pmass": integer_pmass(&l.chain, p),
                    "support_mod_p": support,
                }),
                text,
            )
        }
        Command::Equiv { p, a, b, chain } => {
            let p = modulus(p)?;
            let la = load(&a, chain.as_deref())?;
            let lb = load(&b, chain.as_deref())?;
            if *la.complex != *lb.complex {
                return Err(CliError::Usage(
                    "the two documents describe different complexes".into(),
                ));
            }
            let cb = lb.chain.transfer(la.complex.clone())?;
            match equiv_mod_p(&la.chain, &cb, p)? {
                Some(cert) => ok(
                    json!({
                        "command": "equiv",
                        "p": p.get(),
                        "equivalent": true,
                        "quotient": ChainEntry::from_chain(&cert.quotient),
                        "checked": cert.checked,
                    }),
                    format!(
                        "equivalent mod {}; A - B = {} * Q with Q = {}",
                        p.get(),
                        p.get(),
                        coeff_list(&cert.quotient)
                    ),
                ),
                None => Ok(Outcome {
                    code: 1,
                    report: json!({ "command": "equiv", "p": p.get(), "equivalent": false }),
                    text: format!("not equivalent mod {}", p.get()),
                }),
            }
        }
        Command::Repair {
            p,
            input,
            out,
            cert,
        } => {
            let p = modulus(p)?;
            let l = load_input(&input)?;
            let (repaired, certificate) = repair(&l.chain, p)?;
            let doc = CertificateDocument::from_certificate(&certificate)?;
            if let Some(path) = &cert {
                write(path, &to_json(&doc))?;
            }
            let chain_doc = ChainDocument::from_complex(&l.complex).with_chain(&l.name, &repaired);
            let printed = emit(out.as_ref(), chain_doc.to_json())?;
            let mut text = format!(
                "repaired in {} iteration{}; M(bd) = {} <= {}",
                doc.iterations,
                if doc.iterations == 1 { "" } else { "s" },
                doc.boundary_mass,
                doc.boundary_mass_bound
            );
            if let Some(printed) = printed {
                text = format!("{printed}{text}");
            }
            ok(
                json!({
                    "command": "repair",
                    "p": p.get(),
                    "iterations": doc.iterations,
                    "boundary_mass": doc.boundary_mass,
                    "boundary_mass_bound": doc.boundary_mass_bound,
                    "output": ChainEntry::from_chain(&repaired),
                }),
                text,
            )
        }
        Command::Verify {
            p,
            input,
            output,
            cert,
        } => {
            let p = modulus(p)?;
            let a = load(&input, None)?;
            let b = load(&output, None)?;
            if *a.complex != *b.complex {
                return Err(CliError::Usage(
                    "input and output describe different complexes".into(),
                ));
            }
            let cert_doc = in_file(&cert, CertificateDocument::parse(&read(&cert)?))?;
            if cert_doc.p != p.get() {
                return Err(CliError::Usage(format!(
                    "certificate is for p = {}, not {}",
                    cert_doc.p,
                    p.get()
                )));
            }
            let certificate = in_file(&cert, cert_doc.certificate(a.complex.clone()))?;
            let out_chain = b.chain.transfer(a.complex.clone())?;
            let report = verify_repair(&a.chain, &out_chain, p, Some(&certificate))?;
            let mut lines: Vec<String> = report
                .checks
                .iter()
                .map(|c| {
                    format!(
                        "[{}] {}: {}",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.detail
                    )
                })
                .collect();
            // The certificate must also describe these very chains.
            let matches = certificate.input == a.chain && certificate.output == out_chain;
            lines.push(format!(
                "[{}] certificate_matches_files",
                if matches { "PASS" } else { "FAIL" }
            ));
            let passed = report.all_pass() && matches;
            Ok(Outcome {
                code: if passed { 0 } else { 1 },
                report: json!({
                    "command": "verify",
                    "p": p.get(),
                    "passed": passed,
                    "certificate_matches_files": matches,
                    "checks": report.checks,
                }),
                text: lines.join("\n"),
            })
        }
        Command::Flatnorm {
            p,
            bound,
            input,
            force,
            out,
        } => {
            let l = load_input(&input)?;
            let options = SearchOptions { bound, force };
            let d = match p {
                Some(p) => flat_norm_mod_p(&l.chain, modulus(p)?, options)?,
                None => flat_norm(&l.chain, options)?,
            };
            let doc = FlatNormDocument::from_decomposition(&l.chain, &d);
            let report =
                serde_json::to_value(&doc).map_err(|e| CliError::Internal(e.to_string()))?;
            emit(out.as_ref(), to_json(&doc))?;
            let value = doc
                .value_exact
                .clone()
                .unwrap_or_else(|| doc.value.to_string());
            let mut text = format!(
                "flat norm {value} (bound {}, {} nodes)",
                d.bound_used, d.nodes
            );
            if d.saturated {
                text.push_str("; witness touches the bound, rerun with a larger --bound");
            }
            ok(report, text)
        }
        Command::GridCheck { p, dims, theta } => {
            let p = modulus(p)?;
            let grid = in_file(
                &theta,
                polychain::io::parse_grid_values(&read(&theta)?, dims.as_deref()),
            )?;
            let report = check_prop_sn(&grid, p);
            let text = format!(
                "M(bd select) = {} vs (p-1) M^p(bd) = {}: {}; ratio {}",
                format_rational(&report.lhs),
                format_rational(&report.rhs),
                if report.passed { "holds" } else { "VIOLATED" },
                report.pmass_ratio_exact.as_deref().unwrap_or("n/a"),
            );
            Ok(Outcome {
                code: if report.passed { 0 } else { 1 },
                report: json!({
                    "command": "grid-check",
                    "dims": grid.dims(),
                    "max_ratio": report.pmass_ratio,
                    "report": report,
                }),
                text,
            })
        }
        Command::GridRandom {
            p,
            dims,
            range,
            seed,
            count,
        } => {
            let p = modulus(p)?;
            if !(1..=100_000).contains(&count) {
                return Err(CliError::Usage(format!("count {count} not in 1..=100000")));
            }
            let mut rng = FixtureRng::new(seed);
            let mut reports = Vec::with_capacity(count);
            let mut max_ratio: Option<f64> = None;
            let mut failures = 0;
            for _ in 0..count {
                let grid = random_grid(&mut rng, &dims, range)?;
                let r = check_prop_sn(&grid, p);
                if let Some(x) = r.pmass_ratio {
                    max_ratio = Some(max_ratio.map_or(x, |m| m.max(x)));
                }
                failures += usize::from(!r.passed);
                reports.push(r);
            }
            let text = format!(
                "{count} grids, {failures} violations, max ratio {} (limit {})",
                max_ratio.map_or("n/a".to_string(), |x| format!("{x:.6}")),
                p.get() - 1
            );
            Ok(Outcome {
                code: if failures == 0 { 0 } else { 1 },
                report: json!({
                    "command": "grid-random",
                    "p": p.get(),
                    "dims": dims,
                    "range": range,
                    "seed": seed,
                    "count": count,
                    "violations": failures,
                    "max_ratio": max_ratio,
                    "reports": reports,
                }),
                text,
            })
        }
        Command::Cone { apex, input, out } => {
            let l = load_input(&input)?;
            let apex = apex
                .iter()
                .map(|c| parse_rational(c.trim()))
                .collect::<polychain::Result<Vec<_>>>()?;
            let c = cone(&l.chain, &apex)?;
            let base = l.chain.transfer(c.complex.clone())?;
            let mut doc = ChainDocument::from_complex(&c.complex).with_chain("cone", &c.chain);
            for (name, entry) in &l.doc.chains {
                if *name != l.name {
                    let other = entry
                        .to_chain(l.complex.clone())?
                        .transfer(c.complex.clone())?;
                    doc = doc.with_chain(name, &other);
                }
            }
            doc = doc.with_chain(&format!("{}_base", l.name), &base);
            let printed = emit(out.as_ref(), doc.to_json())?;
            let total: i64 = l.chain.iter().map(|(_, v)| v).sum();
            ok(
                json!({
                    "command": "cone",
                    "apex_index": c.apex,
                    "apex_multiplicity": total,
                    "cone": ChainEntry::from_chain(&c.chain),
                }),
                printed.unwrap_or_else(|| {
                    format!(
                        "cone with {} edges, apex vertex {}",
                        c.chain.cell_count(),
                        c.apex
                    )
                }),
            )
        }
        Command::Zerosum { p, input } => {
            let p = modulus(p)?;
            let l = load_input(&input)?;
            let passed = zero_sum_check(&l.chain, p)?;
            let sum: i64 = l.chain.iter().map(|(_, v)| v).sum();
            Ok(Outcome {
                code: if passed { 0 } else { 1 },
                report: json!({ "command": "zerosum", "p": p.get(), "sum": sum, "passed": passed }),
                text: format!(
                    "coefficient sum {sum} is {}divisible by {}",
                    if passed { "" } else { "not " },
                    p.get()
                ),
            })
        }
        Command::Gen {
            kind,
            seed,
            k,
            dims,
            range,
            max_vertices,
            max_edges,
            out,
        } => {
            let mut rng = FixtureRng::new(seed);
            let text = match kind {
                GenKind::RandomGrid => {
                    let dims =
                        dims.ok_or_else(|| CliError::Usage("random-grid needs --dims".into()))?;
                    to_json(&GridDocument::from_grid(&random_grid(
                        &mut rng, &dims, range,
                    )?))
                }
                _ => {
                    let chain = match kind {
                        GenKind::RandomOneChain => {
                            let params = RandomChainParams {
                                max_vertices,
                                max_edges,
                                range,
                                dim: 2,
                            };
                            random_one_chain(&mut rng, params)?
                        }
                        GenKind::ParallelBundle => parallel_bundle(k)?,
                        _ => path_graph(k)?,
                    };
                    ChainDocument::from_complex(chain.complex())
                        .with_chain("P", &chain)
                        .to_json()
                }
            };
            let report: Value =
                serde_json::from_str(&text).map_err(|e| CliError::Internal(e.to_string()))?;
            let printed = emit(out.as_ref(), text)?;
            ok(report, printed.unwrap_or_default())
        }
    }
}
