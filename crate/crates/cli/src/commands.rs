use std::fmt::Write as _;

use qpa_core::analysis::{error_budget as evaluate_budget, ErrorBudgetParams};
use qpa_core::encoder::{build_direct_diagonal, build_qwe_circuit, encode_qate, WindowSpec};
use qpa_core::evolution::{evolve_quantum, EvolutionConfig};
use qpa_core::grid::{kinetic_phase_profile, Grid, PacketSpec, PotentialKind, PotentialSpec};
use qpa_core::report::{
    budget_text, diagonal_table, fidelity_reference_table, fidelity_table, format_float,
    histogram_table, metrics_row, metrics_table, profile_table, state_table, summary_table,
    FidelityRow, Format, SummaryRow, Table,
};
use qpa_core::statevector::extract_diagonal;
use qpa_core::{count_gates, qate_gate_count, Error};

use crate::config::Settings;
use crate::{CliError, Output};

fn format(s: &Settings) -> Result<Format, CliError> {
    s.parse("format")
}

fn push_table(out: &mut Output, dir: &str, table: &Table, format: Format) -> Result<(), CliError> {
    let name = format!("{}.{}", table.name, format.extension());
    let path = if dir.is_empty() {
        name
    } else {
        format!("{dir}/{name}")
    };
    out.file(path, table.render(format)?);
    Ok(())
}

fn single_width(s: &Settings) -> Result<usize, CliError> {
    match s.list("qubits")?.as_slice() {
        [n] => Ok(*n),
        _ => Err(CliError::Usage(format!(
            "{} takes a single --qubits value, got {:?}",
            s.command().as_str(),
            s.get("qubits")
        ))),
    }
}

fn pyramid_width(s: &Settings) -> Result<usize, CliError> {
    let n = single_width(s)?;
    if n < 2 {
        return Err(Error::InvalidWidth {
            got: n,
            reason: "the pyramid needs at least two qubits",
        }
        .into());
    }
    Ok(n)
}

pub fn encode_ke(s: &Settings) -> Result<Output, CliError> {
    let n = pyramid_width(s)?;
    let grid = Grid::new(s.parse("d")?, n)?;
    let profile = kinetic_phase_profile(&grid, s.parse("dt")?, s.parse("mass")?)?;
    let method = s.get("method");
    let window = match s.get("window") {
        "none" => None,
        _ => Some(s.list("window")?),
    };
    let budget: Option<usize> = s.parse_auto("cp_budget")?;
    if method != "qwe" && (window.is_some() || budget.is_some()) {
        return Err(CliError::Usage(
            "--window and --cp-budget only apply to --method qwe".into(),
        ));
    }
    let big = grid.len();
    let (circuit, checked): (_, Vec<usize>) = match method {
        "qate" => (encode_qate(&profile)?, (0..big).collect()),
        "direct" => (build_direct_diagonal(n, &profile)?, (0..big).collect()),
        "qwe" => {
            let window =
                window.ok_or_else(|| CliError::Usage("--method qwe needs --window".into()))?;
            let mut spec = WindowSpec::new(window, n);
            if let Some(b) = budget {
                spec = spec.with_budget(b);
            }
            let circuit = build_qwe_circuit(n, &profile.first_half()?, &spec)?;
            let checked = spec
                .indices
                .iter()
                .flat_map(|&j| [j, big - 1 - j])
                .collect();
            (circuit, checked)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown method {other:?} (expected qate, qwe or direct)"
            )))
        }
    };
    let diagonal = extract_diagonal(&circuit)?;
    let target = profile.target_diagonal();
    let max_error = checked
        .iter()
        .map(|&i| (diagonal[i] - target[i]).norm())
        .fold(0.0, f64::max);
    let m = count_gates(&circuit)?;

    let fmt = format(s)?;
    let mut out = Output::default();
    let mut json = circuit.to_json()?;
    json.push('\n');
    out.file("circuit.json", json);
    push_table(&mut out, "", &diagonal_table("diagonal", &diagonal), fmt)?;
    push_table(&mut out, "", &diagonal_table("target", &target), fmt)?;
    push_table(
        &mut out,
        "",
        &profile_table("profile", profile.theta()),
        fmt,
    )?;
    let _ = writeln!(out.stdout, "method = {method}");
    let _ = writeln!(out.stdout, "qubits = {n}");
    let _ = writeln!(
        out.stdout,
        "gates = {} (1q {}, 2q {}), depth = {}",
        m.total, m.one_qubit_count, m.two_qubit_count, m.depth
    );
    let _ = writeln!(out.stdout, "checked entries = {}", checked.len());
    let _ = writeln!(out.stdout, "max error = {}", format_float(max_error));
    Ok(out)
}

/// Evolution settings for width `n` and `nt` substeps per reported step.
pub fn evolution_config(s: &Settings, n: usize, nt: usize) -> Result<EvolutionConfig, CliError> {
    let grid = Grid::new(s.parse("d")?, n)?;
    let kind: PotentialKind = s.parse("potential")?;
    let config = EvolutionConfig {
        grid,
        packet: PacketSpec { k0: s.parse("k0")? },
        potential: PotentialSpec::standard(kind, s.parse("eta")?, &grid)?,
        dt: s.parse("dt")?,
        trotter_steps: nt,
        total_steps: s.parse("steps")?,
        mode: s.parse("mode")?,
        shots: s.parse("shots")?,
        seed: s.parse("seed")?,
        mass: s.parse("mass")?,
    };
    config.validate()?;
    Ok(config)
}

fn trotter_list(s: &Settings) -> Result<Vec<usize>, CliError> {
    let list = s.list("trotter_steps")?;
    if list.is_empty() {
        return Err(Error::InvalidParameter("trotter_steps lists no values".into()).into());
    }
    Ok(list)
}

pub fn evolve(s: &Settings) -> Result<Output, CliError> {
    let n = single_width(s)?;
    let fmt = format(s)?;
    let mut out = Output::default();
    for nt in trotter_list(s)? {
        let result = evolve_quantum(&evolution_config(s, n, nt)?)?;
        let dir = format!("nt{nt}");
        let mut summary = Vec::with_capacity(result.quantum.len());
        for (step, quantum) in result.quantum.iter().enumerate() {
            push_table(
                &mut out,
                &dir,
                &state_table(format!("quantum_{step:04}"), quantum),
                fmt,
            )?;
            push_table(
                &mut out,
                &dir,
                &state_table(format!("oracle_{step:04}"), &result.oracle[step]),
                fmt,
            )?;
            push_table(
                &mut out,
                &dir,
                &histogram_table(format!("histogram_{step:04}"), &result.histograms[step]),
                fmt,
            )?;
            summary.push(SummaryRow {
                step,
                exact_fidelity: result.exact_fidelities[step],
                swap_fidelity: result.swap_fidelities[step].estimated,
                norm: quantum.norm(),
            });
        }
        push_table(&mut out, &dir, &summary_table(&summary), fmt)?;
        let last = summary
            .last()
            .expect("the initial state is always reported");
        let _ = writeln!(
            out.stdout,
            "Nt = {nt}: step {} exact fidelity {}, swap estimate {}",
            last.step,
            format_float(last.exact_fidelity),
            format_float(last.swap_fidelity)
        );
    }
    Ok(out)
}

/// Exact and swap-test fidelity at the final reported step.
pub fn fidelity_row(config: &EvolutionConfig) -> Result<FidelityRow, CliError> {
    let result = evolve_quantum(config)?;
    let report = *result
        .swap_fidelities
        .last()
        .expect("the initial state is always reported");
    Ok(FidelityRow {
        n: config.grid.n_qubits(),
        mode: config.mode,
        nt: config.trotter_steps,
        report,
    })
}

pub fn fidelity_rows(s: &Settings) -> Result<Vec<FidelityRow>, CliError> {
    let nts = trotter_list(s)?;
    let mut rows = Vec::new();
    for n in s.list("qubits")? {
        for &nt in &nts {
            rows.push(fidelity_row(&evolution_config(s, n, nt)?)?);
        }
    }
    Ok(rows)
}

pub fn fidelity(s: &Settings) -> Result<Output, CliError> {
    let fmt = format(s)?;
    let rows = fidelity_rows(s)?;
    let mut out = Output::default();
    push_table(&mut out, "", &fidelity_table(&rows), fmt)?;
    push_table(&mut out, "", &fidelity_reference_table(&rows), fmt)?;
    for r in &rows {
        let _ = writeln!(
            out.stdout,
            "n = {} Nt = {}: exact {}, swap {} +/- {}",
            r.n,
            r.nt,
            format_float(r.report.exact),
            format_float(r.report.estimated),
            format_float(r.report.std_error)
        );
    }
    Ok(out)
}

pub fn metrics(s: &Settings) -> Result<Output, CliError> {
    let fmt = format(s)?;
    let rows = s
        .list("qubits")?
        .into_iter()
        .map(metrics_row)
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Output::default();
    push_table(&mut out, "", &metrics_table(&rows), fmt)?;
    for r in &rows {
        let _ = writeln!(
            out.stdout,
            "n = {}: total {} (baseline {}), depth {}",
            r.n, r.qate_total, r.baseline_total, r.depth_ours
        );
    }
    Ok(out)
}

pub fn budget_params(s: &Settings) -> Result<ErrorBudgetParams, CliError> {
    let n = pyramid_width(s)?;
    let h = match s.parse_auto("h")? {
        Some(h) => h,
        None => Grid::new(s.parse("d")?, n)?.spacing(),
    };
    let l2 = match s.parse_auto("l2")? {
        Some(l2) => l2,
        None => qate_gate_count(n)?.two_qubit_count,
    };
    Ok(ErrorBudgetParams {
        h,
        l2,
        sigma_g2: s.parse("sigma_g2")?,
        t1: s.parse("t1")?,
        t2: s.parse("t2")?,
        dt: s.parse("dt")?,
        sigma_cr2: s.parse("sigma_cr2")?,
    })
}

pub fn error_budget(s: &Settings) -> Result<Output, CliError> {
    let fmt = format(s)?;
    let p = budget_params(s)?;
    let b = evaluate_budget(&p)?;
    let mut table = Table::new("budget", vec!["term", "value"]);
    for (term, value) in [
        ("discretization", b.discretization),
        ("gate", b.gate),
        ("decoherence", b.decoherence),
        ("readout", b.readout),
        ("total", b.total),
    ] {
        table.push(vec![term.into(), value.into()]);
    }
    let mut out = Output::default();
    push_table(&mut out, "", &table, fmt)?;
    let _ = writeln!(
        out.stdout,
        "h = {}, L2 = {}, sigma_g2 = {}, T1 = {}, T2 = {}, dt = {}, sigma_cr2 = {}",
        p.h, p.l2, p.sigma_g2, p.t1, p.t2, p.dt, p.sigma_cr2
    );
    out.stdout.push_str(&budget_text(&b));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{CommandName, Settings};

    fn settings(command: CommandName, flags: &[(&str, &str)]) -> Settings {
        let flags: Vec<(&str, String)> = flags.iter().map(|&(k, v)| (k, v.to_string())).collect();
        Settings::resolve(command, None, &flags).unwrap()
    }

    fn text(out: &Output, name: &str) -> String {
        let (_, bytes) = out
            .files
            .iter()
            .find(|(p, _)| p.to_str() == Some(name))
            .unwrap_or_else(|| panic!("{name} missing"));
        String::from_utf8(bytes.clone()).unwrap()
    }

    fn complex_rows(csv: &str) -> Vec<(f64, f64)> {
        csv.lines()
            .skip(1)
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                (f[1].parse().unwrap(), f[2].parse().unwrap())
            })
            .collect()
    }

    #[test]
    fn qate_diagonal_matches_target() {
        let out = encode_ke(&settings(
            CommandName::EncodeKe,
            &[("qubits", "5"), ("d", "10"), ("dt", "0.1")],
        ))
        .unwrap();
        let got = complex_rows(&text(&out, "diagonal.csv"));
        let want = complex_rows(&text(&out, "target.csv"));
        assert_eq!(got.len(), 32);
        for (a, b) in got.iter().zip(&want) {
            assert!((a.0 - b.0).abs() < 1e-10 && (a.1 - b.1).abs() < 1e-10);
        }
        assert!(text(&out, "circuit.json").ends_with("}\n"));
    }

    #[test]
    fn qwe_window_rows_match() {
        let out = encode_ke(&settings(
            CommandName::EncodeKe,
            &[("method", "qwe"), ("window", "11..15")],
        ))
        .unwrap();
        let got = complex_rows(&text(&out, "diagonal.csv"));
        let want = complex_rows(&text(&out, "target.csv"));
        for j in 11..=15 {
            for i in [j, 31 - j] {
                assert!((got[i].0 - want[i].0).abs() < 1e-9 && (got[i].1 - want[i].1).abs() < 1e-9);
            }
        }
        assert!(
            out.stdout.contains("gates = 13 (1q 4, 2q 9)"),
            "{}",
            out.stdout
        );
    }

    #[test]
    fn encode_rejects_bad_input() {
        let one = encode_ke(&settings(CommandName::EncodeKe, &[("qubits", "1")])).unwrap_err();
        assert_eq!(one.exit_code(), 3);
        let no_window =
            encode_ke(&settings(CommandName::EncodeKe, &[("method", "qwe")])).unwrap_err();
        assert_eq!(no_window.exit_code(), 2);
        let stray = encode_ke(&settings(CommandName::EncodeKe, &[("window", "1..2")])).unwrap_err();
        assert_eq!(stray.exit_code(), 2);
        let infeasible = encode_ke(&settings(
            CommandName::EncodeKe,
            &[("method", "qwe"), ("window", "0..15"), ("cp_budget", "0")],
        ))
        .unwrap_err();
        assert_eq!(infeasible.exit_code(), 3);
        let method = encode_ke(&settings(CommandName::EncodeKe, &[("method", "fft")])).unwrap_err();
        assert_eq!(method.exit_code(), 2);
    }

    #[test]
    fn evolve_without_steps_reports_initial_state_only() {
        let out = evolve(&settings(
            CommandName::Evolve,
            &[
                ("qubits", "3"),
                ("steps", "0"),
                ("trotter_steps", "10,20"),
                ("shots", "100"),
            ],
        ))
        .unwrap();
        let mut names: Vec<_> = out
            .files
            .iter()
            .map(|(p, _)| p.to_str().unwrap().to_string())
            .collect();
        names.sort();
        assert_eq!(
            names,
            [
                "nt10/histogram_0000.csv",
                "nt10/oracle_0000.csv",
                "nt10/quantum_0000.csv",
                "nt10/summary.csv",
                "nt20/histogram_0000.csv",
                "nt20/oracle_0000.csv",
                "nt20/quantum_0000.csv",
                "nt20/summary.csv",
            ]
        );
        assert_eq!(text(&out, "nt10/summary.csv").lines().count(), 2);
    }

    #[test]
    fn evolve_is_deterministic() {
        let s = settings(
            CommandName::Evolve,
            &[
                ("qubits", "4"),
                ("steps", "2"),
                ("trotter_steps", "5"),
                ("seed", "9"),
            ],
        );
        assert_eq!(evolve(&s).unwrap(), evolve(&s).unwrap());
    }

    #[test]
    fn metrics_rows_and_empty_range() {
        let out = metrics(&settings(CommandName::Metrics, &[("qubits", "4..4")])).unwrap();
        assert_eq!(
            text(&out, "metrics.csv").lines().nth(1).unwrap(),
            "4,3,9,12,18,8,18,24"
        );
        let empty = metrics(&settings(CommandName::Metrics, &[("qubits", "5..4")])).unwrap();
        assert_eq!(text(&empty, "metrics.csv").lines().count(), 1);
    }

    #[test]
    fn fidelity_sweep_columns() {
        let out = fidelity(&settings(
            CommandName::Fidelity,
            &[("qubits", "3..4"), ("shots", "200"), ("format", "json")],
        ))
        .unwrap();
        let table = text(&out, "fidelity.json");
        assert!(table.contains("\"swap_estimate\""));
        assert!(text(&out, "fidelity_reference.json").contains("\"reference\": 0.73"));
    }

    #[test]
    fn budget_is_itemized() {
        let out = error_budget(&settings(
            CommandName::ErrorBudget,
            &[("h", "0.00097"), ("l2", "0"), ("dt", "0")],
        ))
        .unwrap();
        for term in ["discretization", "gate", "decoherence", "readout", "total"] {
            assert!(out.stdout.contains(&format!("{term} = ")), "{term}");
        }
        assert!(out.stdout.contains("total = 9.12673"));
        let bad = error_budget(&settings(CommandName::ErrorBudget, &[("t1", "0")])).unwrap_err();
        assert_eq!(bad.exit_code(), 3);
    }

    #[test]
    fn budget_defaults_follow_width() {
        let p = budget_params(&settings(CommandName::ErrorBudget, &[("qubits", "4")])).unwrap();
        assert_eq!(p.l2, 9);
        assert_eq!(p.h, 20.0 / 16.0);
    }
}
