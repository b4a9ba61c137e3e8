use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use relsem::gen::{self, case_rng, ProgramGen};
use relsem::imp::{denote_nrm_inf, oracle_inf};
use relsem::laws::{catalog, run_laws, LawConfig};
use relsem::par::{map_indexed, Exec};

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn law_suite(c: &mut Criterion) {
    let laws = catalog();
    let cfg = LawConfig {
        cases: 50,
        ..LawConfig::default()
    };
    let mut g = c.benchmark_group("laws");
    g.sample_size(10);
    for (name, exec) in EXECS {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_laws(&laws, &cfg, exec))
        });
    }
    g.finish();
}

fn semantics_vs_oracle(c: &mut Criterion) {
    let pg = ProgramGen {
        max_depth: 4,
        allow_write: false,
        allow_choice: true,
    };
    let mut g = c.benchmark_group("nrminf_vs_oracle");
    g.sample_size(10);
    for (name, exec) in EXECS {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                map_indexed(200, exec, |case| {
                    let mut rng = case_rng(0, 0, case as u64);
                    let u = gen::program_universe(&mut rng);
                    let p = pg.command(&mut rng, &u);
                    denote_nrm_inf(&p, &u).unwrap().0.inf == oracle_inf(&p, &u).unwrap()
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, law_suite, semantics_vs_oracle);
criterion_main!(benches);
