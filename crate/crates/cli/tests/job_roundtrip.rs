use std::collections::BTreeMap;

use fracrh_cli::job::{
    AxisSpec, DegenerateSpec, DeriveSpec, Entry, Format, JobSpec, Kind, OutputSpec, RandomSpec,
    RouteSpec, SamplingSpec, ScanSpec, SystemSpec, Tolerances,
};
use proptest::prelude::*;

fn roundtrip(spec: &JobSpec) -> JobSpec {
    let text = spec.to_toml().unwrap();
    JobSpec::parse(&text).unwrap_or_else(|e| panic!("{e:#}\n{text}"))
}

#[test]
fn shipped_job_files_roundtrip() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let spec = JobSpec::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(roundtrip(&spec), spec, "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 6);
}

fn entry() -> impl Strategy<Value = Entry> {
    prop_oneof![
        (-50i64..50).prop_map(Entry::Int),
        (-50.0f64..50.0).prop_map(Entry::Float),
        (-20i64..20, 1i64..9).prop_map(|(p, q)| Entry::Text(format!("{p}/{q}"))),
    ]
}

fn matrix(n: usize) -> impl Strategy<Value = Vec<Vec<Entry>>> {
    prop::collection::vec(prop::collection::vec(entry(), n), n)
}

fn system() -> impl Strategy<Value = SystemSpec> {
    let plain = matrix(3).prop_map(|m| SystemSpec {
        matrix: Some(m),
        ..SystemSpec::default()
    });
    let family =
        (prop::collection::vec(matrix(2), 3), -5.0f64..5.0).prop_map(|(b, x)| SystemSpec {
            basis: Some(b),
            params: vec!["p".into(), "q".into()],
            point: BTreeMap::from([
                ("p".to_string(), Entry::Float(x)),
                ("q".to_string(), Entry::Text("1/3".into())),
            ]),
            ..SystemSpec::default()
        });
    let poly = Just(SystemSpec {
        coefficients: Some(vec!["beta - alpha".into(), "2*beta".into(), "4".into()]),
        params: vec!["beta".into()],
        ..SystemSpec::default()
    });
    prop_oneof![plain, family, poly]
}

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![
        Just(Kind::Check),
        Just(Kind::Region),
        Just(Kind::Derive),
        Just(Kind::OracleCompare)
    ]
}

prop_compose! {
    fn job()(
        kind in kind(),
        alpha in prop::option::of(1.0f64..1.999),
        system in prop::option::of(system()),
        lo in -10.0f64..0.0,
        count in 2usize..400,
        centers in any::<bool>(),
        boundary in prop::option::of(1e-12f64..1e-3),
        workers in prop::option::of(1usize..16),
        delegate in any::<bool>(),
        fmt in prop_oneof![Just(Format::Csv), Just(Format::Pgm), Just(Format::Both)],
        order in 2usize..6,
        seed in any::<u64>(),
    ) -> JobSpec {
        JobSpec {
            kind,
            alpha,
            system,
            axes: vec![AxisSpec {
                name: "p".into(),
                lo,
                hi: lo + 3.5,
                count,
                sampling: if centers { SamplingSpec::Centers } else { SamplingSpec::Nodes },
            }],
            tolerances: Some(Tolerances { boundary, angle: Some(1e-9) }),
            scan: Some(ScanSpec {
                workers,
                degenerate: Some(if delegate { DegenerateSpec::Delegate } else { DegenerateSpec::Mark }),
                route: Some(RouteSpec::Theorem1),
            }),
            output: Some(OutputSpec {
                dir: Some("out".into()),
                format: Some(fmt),
                plot_script: Some(true),
                stem: None,
            }),
            derive: Some(DeriveSpec { order }),
            random: Some(RandomSpec { count: 10, order, seed: Some(seed) }),
        }
    }
}

proptest! {
    #[test]
    fn parse_serialize_parse_is_identity(spec in job()) {
        let once = roundtrip(&spec);
        prop_assert_eq!(&once, &spec);
        prop_assert_eq!(roundtrip(&once), once);
    }
}
