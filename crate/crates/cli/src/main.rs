//! `bourdon` — tessellations by right-angled p-gons, complexes of finite
//! groups over them, and the lattice-quotient decision procedure for
//! Bourdon buildings `I_{p,v}`.
//!
//! Exit codes: `decide` and `decide-tiling` exit 0 (exists), 1 (does not
//! exist) or 2 (unknown).  Verification commands exit 0 when every check
//! passes and 4 when some check fails.  Usage and I/O errors exit 3.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use bourdon::json;
use bourdon::{cog, decide, diophantine, homology, indexing, surface, tess};

#[derive(Parser)]
#[command(
    name = "bourdon",
    version,
    about = "Surface tessellations by right-angled p-gons and lattice quotients of Bourdon buildings",
    after_help = "Exit codes: decide/decide-tiling 0=exists 1=not-exists 2=unknown; \
verifiers 0=pass 4=fail; errors 3."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConstructionArg {
    Auto,
    Div4,
    Jigsaw,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a tessellation with F faces of p sides and write it as JSON.
    Tessellate {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        faces: u64,
        #[arg(long, value_enum, default_value_t = ConstructionArg::Auto)]
        construction: ConstructionArg,
        /// Jigsaw columns (only with --construction jigsaw).
        #[arg(long)]
        x: Option<usize>,
        /// Jigsaw rows (only with --construction jigsaw).
        #[arg(long)]
        y: Option<usize>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Validate a tessellation file and print the full report.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Homology reports: sign-pattern search, nonzero-coefficient scan,
    /// or vertex types of a certificate's 2-chain.
    Homology {
        #[arg(long = "in")]
        input: PathBuf,
        /// Exhaustive ±1 sign-pattern search.
        #[arg(long)]
        signs: bool,
        /// Integer-kernel scan for nonzero coefficients.
        #[arg(long)]
        nonzero: bool,
        /// Vertex-type report for the 2-chain of this certificate file.
        #[arg(long)]
        types: Option<PathBuf>,
    },
    /// Check the three indexing laws (v-thickness, parallel transport,
    /// unimodularity) for an indexing over a tessellation.
    IndexingCheck {
        #[arg(long)]
        tessellation: PathBuf,
        #[arg(long)]
        indexing: PathBuf,
        #[arg(long)]
        v: u64,
    },
    /// Solve the unimodularity product equation for (v, k).
    Unimod {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        k: usize,
        /// Enumerate all solutions.
        #[arg(long)]
        all: bool,
        /// Count all solutions.
        #[arg(long, conflicts_with = "all")]
        count: bool,
        /// Stop at the first solution (default).
        #[arg(long, conflicts_with_all = ["all", "count"])]
        first: bool,
        /// Also print which closed form or obstruction applies.
        #[arg(long)]
        explain: bool,
        /// Node budget for the exhaustive search.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Build a complex of groups over a tessellation: either the even-v
    /// product construction or the certificate construction.
    BuildCog {
        #[arg(long)]
        tessellation: PathBuf,
        /// Even v for the product construction.
        #[arg(long, conflicts_with_all = ["cert", "b"])]
        even_v: Option<u64>,
        /// Layered certificate file for the certificate construction.
        #[arg(long, requires = "b", requires = "v")]
        cert: Option<PathBuf>,
        /// Base b for the certificate construction.
        #[arg(long)]
        b: Option<u64>,
        /// Thickness v (required with --cert).
        #[arg(long)]
        v: Option<u64>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Verify a complex of groups: structure, K_{v,v} links at every
    /// vertex by both routes, and the induced-indexing laws.
    VerifyCog {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        v: u64,
    },
    /// Decide the triple (p, v, g).
    Decide {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        v: u64,
        #[arg(long)]
        g: u64,
        /// Write witness artifacts for an exists verdict into this directory.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Decide over a fixed tessellation file.
    DecideTiling {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        v: u64,
        /// Write witness artifacts for an exists verdict into this directory.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{}", e);
                std::process::exit(0);
            }
            eprint!("{}", e);
            std::process::exit(3);
        }
    };
    match run(cli.cmd) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e);
            std::process::exit(3);
        }
    }
}

fn emit(value: &serde_json::Value) -> Result<(), String> {
    let s = json::to_canonical_string(value)?;
    print!("{}", s);
    Ok(())
}

fn load_tessellation(path: &Path) -> Result<surface::TiledSurface, String> {
    let j: json::TessellationJson = json::load(path)?;
    json::tessellation_from_json(&j)
}

fn run(cmd: Cmd) -> Result<i32, String> {
    match cmd {
        Cmd::Tessellate { p, faces, construction, x, y, out } => {
            let build = match construction {
                ConstructionArg::Auto => {
                    if x.is_some() || y.is_some() {
                        return Err("--x/--y require --construction jigsaw".into());
                    }
                    tess::build_any(p, faces)?
                }
                ConstructionArg::Div4 => {
                    if x.is_some() || y.is_some() {
                        return Err("--x/--y require --construction jigsaw".into());
                    }
                    let (ts, cert) = tess::build_f_div4(p, faces)?;
                    tess::Build {
                        ts,
                        construction: tess::Construction::Div4,
                        certificate: Some(cert),
                    }
                }
                ConstructionArg::Jigsaw => {
                    let (x, y) = match (x, y) {
                        (Some(x), Some(y)) => (x, y),
                        _ => tess::jigsaw_factorization(p, faces)
                            .ok_or_else(|| "no jigsaw factorization for these faces".to_string())?,
                    };
                    let (ts, cert) = tess::build_jigsaw(p, faces, x, y)?;
                    tess::Build {
                        ts,
                        construction: tess::Construction::Jigsaw { x, y },
                        certificate: cert,
                    }
                }
            };
            json::save(&out, &json::tessellation_to_json(&build.ts))?;
            let report = build.ts.validate();
            emit(&serde_json::json!({
                "written": out.display().to_string(),
                "construction": match build.construction {
                    tess::Construction::Div4 => "div4".to_string(),
                    tess::Construction::Jigsaw { x, y } => format!("jigsaw {}x{}", x, y),
                },
                "native_certificate": build.certificate.is_some(),
                "faces": report.faces,
                "edges": report.edges,
                "vertices": report.vertices,
                "genus": report.genus,
            }))?;
            Ok(0)
        }
        Cmd::Validate { input } => {
            let j: json::TessellationJson = json::load(&input)?;
            let ts = json::tessellation_from_json(&j)?;
            let report = ts.validate();
            emit(&serde_json::json!({
                "valid": report.valid,
                "errors": report.errors,
                "p": report.p,
                "darts": report.darts,
                "faces": report.faces,
                "edges": report.edges,
                "vertices": report.vertices,
                "euler": report.euler,
                "genus": report.genus,
            }))?;
            Ok(if report.valid { 0 } else { 4 })
        }
        Cmd::Homology { input, signs, nonzero, types } => {
            let ts = load_tessellation(&input)?;
            homology_cmd(&ts, signs, nonzero, types)
        }
        Cmd::IndexingCheck { tessellation, indexing: ind_path, v } => {
            let ts = load_tessellation(&tessellation)?;
            let ij: json::IndexingJson = json::load(&ind_path)?;
            let ind = json::indexing_from_json(&ij, &ts)?;
            let thick = indexing::is_v_thick(&ind, &ts, v)?;
            let transport = indexing::has_parallel_transport(&ind, &ts)?;
            let unimod = indexing::is_unimodular(&ind, &ts)?;
            let ok = thick.ok && transport.ok && unimod.is_unimodular();
            emit(&serde_json::json!({
                "v_thick": thick.ok,
                "thickness_violations": thick.violations.len(),
                "parallel_transport": transport.ok,
                "unimodular": unimod.is_unimodular(),
                "ok": ok,
            }))?;
            Ok(if ok { 0 } else { 4 })
        }
        Cmd::Unimod { v, k, all, count, first: _, explain, budget } => {
            let mode = if all {
                diophantine::SearchMode::All
            } else if count {
                diophantine::SearchMode::Count
            } else {
                diophantine::SearchMode::First
            };
            let search = diophantine::solve_unimod(v, k, mode, budget);
            diophantine::consistency_check(&search)?;
            let mut out = serde_json::json!({
                "v": v,
                "k": k,
                "complete": search.complete,
                "count": search.count(),
                "solutions": if matches!(mode, diophantine::SearchMode::Count) {
                    serde_json::Value::Null
                } else {
                    serde_json::json!(search.solutions)
                },
            });
            if explain {
                let e = diophantine::explain(v, k);
                out["explain"] = serde_json::json!({
                    "verdict": e.verdict,
                    "reasons": e.reasons,
                    "easy_solution": e.easy,
                });
            }
            emit(&out)?;
            Ok(0)
        }
        Cmd::BuildCog { tessellation, even_v, cert, b, v, out } => {
            let ts = load_tessellation(&tessellation)?;
            let (cog, v_used) = match (even_v, cert) {
                (Some(v), None) => (cog::build_even_v(&ts, v)?, v),
                (None, Some(cert_path)) => {
                    let b = b.ok_or_else(|| "--cert needs --b".to_string())?;
                    let v = v.ok_or_else(|| "--cert needs --v".to_string())?;
                    let cj: json::LayeredCertificateJson = json::load(&cert_path)?;
                    let cert = json::layered_certificate_from_json(&cj)?;
                    (cog::build_from_certificate(&ts, &cert, b, v)?, v)
                }
                _ => return Err("use exactly one of --even-v or --cert".into()),
            };
            json::save(&out, &json::complex_to_json(&cog))?;
            emit(&serde_json::json!({
                "written": out.display().to_string(),
                "v": v_used,
                "faithful": cog.is_faithful() == cog::Faithfulness::FaithfulByTrivialFace,
            }))?;
            Ok(0)
        }
        Cmd::VerifyCog { input, v } => {
            let cj: json::ComplexJson = json::load(&input)?;
            let cog = json::complex_from_json(&cj)?;
            let report = cog.verify(v)?;
            let per_vertex: Vec<serde_json::Value> = report
                .per_vertex
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "vertex": r.vertex,
                        "criterion_ok": r.criterion_ok,
                        "graph_ok": r.graph_ok,
                    })
                })
                .collect();
            let ind = cog.induced_indexing();
            let thick = indexing::is_v_thick(&ind, &cog.ts, v)?;
            let transport = indexing::has_parallel_transport(&ind, &cog.ts)?;
            let unimod = indexing::is_unimodular(&ind, &cog.ts)?;
            emit(&serde_json::json!({
                "vertices": report.vertices,
                "all_links_kvv": report.all_links_kvv,
                "routes_agree": report.routes_agree,
                "graphs_built": report.graphs_built,
                "faithful": match report.faithful {
                    cog::Faithfulness::FaithfulByTrivialFace => "trivial-face",
                    cog::Faithfulness::Unknown => "unknown",
                },
                "indexing": {
                    "v_thick": thick.ok,
                    "parallel_transport": transport.ok,
                    "unimodular": unimod.is_unimodular(),
                },
                "per_vertex": per_vertex,
                "ok": report.ok(),
            }))?;
            Ok(if report.ok() { 0 } else { 4 })
        }
        Cmd::Decide { p, v, g, witness } => {
            let verdict = decide::decide(p, v, g)?;
            if let Some(dir) = witness {
                if verdict.outcome == decide::Outcome::Exists {
                    let (build, cog) = decide::decide_witness(p, v, g)?
                        .ok_or_else(|| "witness vanished on rebuild".to_string())?;
                    write_witness(&dir, &verdict, Some(&build.ts), build.certificate.as_ref(), &cog)?;
                } else {
                    std::fs::create_dir_all(&dir)
                        .map_err(|e| format!("creating {}: {}", dir.display(), e))?;
                    json::save(&dir.join("verdict.json"), &json::verdict_to_json(&verdict))?;
                }
            }
            emit(&serde_json::json!(json_verdict(&verdict)))?;
            Ok(verdict.outcome.exit_code())
        }
        Cmd::DecideTiling { input, v, witness } => {
            let ts = load_tessellation(&input)?;
            let verdict = decide::decide_over_tiling(&ts, v)?;
            if let Some(dir) = witness {
                if verdict.outcome == decide::Outcome::Exists {
                    let cog = decide::decide_over_tiling_witness(&ts, v)?
                        .ok_or_else(|| "witness vanished on rebuild".to_string())?;
                    write_witness(&dir, &verdict, None, None, &cog)?;
                } else {
                    std::fs::create_dir_all(&dir)
                        .map_err(|e| format!("creating {}: {}", dir.display(), e))?;
                    json::save(&dir.join("verdict.json"), &json::verdict_to_json(&verdict))?;
                }
            }
            emit(&serde_json::json!(json_verdict(&verdict)))?;
            Ok(verdict.outcome.exit_code())
        }
    }
}

fn json_verdict(v: &decide::Verdict) -> serde_json::Value {
    serde_json::to_value(json::verdict_to_json(v)).expect("verdict serializes")
}

fn write_witness(
    dir: &Path,
    verdict: &decide::Verdict,
    ts: Option<&surface::TiledSurface>,
    cert: Option<&homology::LayeredCertificate>,
    cog: &cog::ComplexOfGroups,
) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("creating {}: {}", dir.display(), e))?;
    json::save(&dir.join("verdict.json"), &json::verdict_to_json(verdict))?;
    if let Some(ts) = ts {
        json::save(&dir.join("tessellation.json"), &json::tessellation_to_json(ts))?;
    }
    if let Some(cert) = cert {
        json::save(&dir.join("certificate.json"), &json::layered_certificate_to_json(cert))?;
    }
    json::save(&dir.join("complex.json"), &json::complex_to_json(cog))?;
    Ok(())
}

fn homology_cmd(
    ts: &surface::TiledSurface,
    signs: bool,
    nonzero: bool,
    types: Option<PathBuf>,
) -> Result<i32, String> {
    if let Some(cert_path) = types {
        let raw = std::fs::read_to_string(&cert_path)
            .map_err(|e| format!("reading {}: {}", cert_path.display(), e))?;
        // Accept either certificate schema; both carry a 2-chain.
        let delta: Vec<BigInt> =
            if let Ok(pj) = serde_json::from_str::<json::PlainCertificateJson>(&raw) {
                let cert = json::plain_certificate_from_json(&pj)?;
                cert.delta
            } else {
                let lj: json::LayeredCertificateJson = serde_json::from_str(&raw)
                    .map_err(|e| format!("parsing {}: {}", cert_path.display(), e))?;
                let cert = json::layered_certificate_from_json(&lj)?;
                cert.delta.iter().map(|&x| BigInt::from(x)).collect()
            };
        let report = homology::vertex_types(ts, &delta)?;
        emit(&serde_json::json!({
            "typed": report.typed,
            "coefficients": report.coefficients,
            "a": report.a,
            "f": report.f,
        }))?;
        return Ok(0);
    }
    if signs {
        let result = homology::find_sign_coeffs(ts);
        let out = match result {
            homology::SignSearch::Found(cert) => serde_json::json!({
                "found": true,
                "certificate": serde_json::to_value(json::plain_certificate_to_json(&cert))
                    .expect("certificate serializes"),
            }),
            homology::SignSearch::Exhausted { patterns } => serde_json::json!({
                "found": false,
                "exhausted_patterns": patterns,
            }),
            homology::SignSearch::Truncated { reason } => serde_json::json!({
                "found": false,
                "truncated": reason,
            }),
        };
        emit(&out)?;
        return Ok(0);
    }
    if nonzero {
        let result = homology::find_nonzero_coeffs(ts);
        let out = match result.certificate {
            Some(cert) => serde_json::json!({
                "found": true,
                "reason": result.reason,
                "certificate": serde_json::to_value(json::plain_certificate_to_json(&cert))
                    .expect("certificate serializes"),
            }),
            None => serde_json::json!({
                "found": false,
                "reason": result.reason,
            }),
        };
        emit(&out)?;
        return Ok(0);
    }
    // Default: a structural summary.
    let report = ts.validate();
    if !report.valid {
        return Err(format!("invalid tessellation: {:?}", report.errors));
    }
    let (h1, _) = homology::h1_classes(ts).map_err(|e| e.to_string())?;
    let geodesics = ts.extract_geodesics();
    emit(&serde_json::json!({
        "faces": report.faces,
        "edges": report.edges,
        "vertices": report.vertices,
        "genus": report.genus,
        "h1_rank": 2 * h1.genus,
        "geodesics": geodesics.len(),
        "geodesic_lengths": geodesics.iter().map(|g| g.len()).collect::<Vec<_>>(),
    }))?;
    Ok(0)
}
