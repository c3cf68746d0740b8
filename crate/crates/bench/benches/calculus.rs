use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use foxcalc::{collect, fox_derivative, magnus_derivation, wreath_eval, Quotient};
use foxcalc_bench::{second_commutators, words};
use std::hint::black_box;

fn fox(c: &mut Criterion) {
    let corpus = words(1, 64, 4, 32);
    c.bench_function("fox_derivative/rank4_len32", |b| {
        b.iter(|| {
            for w in &corpus {
                black_box(fox_derivative(w, 0, 4).unwrap());
            }
        })
    });
}

fn word_problem(c: &mut Criterion) {
    let corpus = second_commutators(2, 32, 3, 6);
    let mut group = c.benchmark_group("metabelian_identity");
    group.bench_function("magnus", |b| {
        b.iter(|| {
            for w in &corpus {
                black_box(
                    magnus_derivation(w, Quotient::abelian(3))
                        .unwrap()
                        .is_zero(),
                );
            }
        })
    });
    group.bench_function("wreath", |b| {
        b.iter(|| {
            for w in &corpus {
                black_box(wreath_eval(w, 3).unwrap().is_identity());
            }
        })
    });
    group.finish();
}

fn solvable_keys(c: &mut Criterion) {
    let corpus = words(3, 16, 2, 12);
    let mut group = c.benchmark_group("solvable_key");
    for length in [2usize, 3] {
        let q = Quotient::solvable(2, length);
        group.bench_with_input(BenchmarkId::from_parameter(length), &q, |b, q| {
            b.iter(|| {
                for w in &corpus {
                    black_box(q.key_of(w).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn collection(c: &mut Criterion) {
    let corpus = words(4, 16, 3, 24);
    let mut group = c.benchmark_group("collect_rank3");
    for class in [2usize, 4, 5] {
        group.bench_with_input(BenchmarkId::from_parameter(class), &class, |b, &class| {
            b.iter(|| {
                for w in &corpus {
                    black_box(collect(w, 3, class).unwrap());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, fox, word_problem, solvable_keys, collection);
criterion_main!(benches);
