use criterion::{criterion_group, criterion_main};

criterion_group!(benches, orir_bench::two_level, orir_bench::addressing, orir_bench::gate);
criterion_main!(benches);
