use criterion::{black_box, criterion_group, criterion_main, Criterion};
use morsekit::{
    barycentric_subdivision, chain_complex, complete_matching, corpus, greedy_morse_matching, hasse, homology,
    is_morse, thom_smale_complex,
};

fn bench_pipeline(c: &mut Criterion) {
    let torus = corpus::torus7();
    let sd = barycentric_subdivision(&torus).complex;
    let h = hasse(&sd);
    let m = greedy_morse_matching(&h);

    c.bench_function("hasse/sd_torus7", |b| b.iter(|| hasse(black_box(&sd))));
    c.bench_function("greedy/sd_torus7", |b| b.iter(|| greedy_morse_matching(black_box(&h))));
    c.bench_function("is_morse/sd_torus7", |b| b.iter(|| is_morse(&h, black_box(&m)).unwrap()));
    c.bench_function("thom_smale/sd_torus7", |b| b.iter(|| thom_smale_complex(&h, black_box(&m)).unwrap()));

    let chain = chain_complex(&sd).unwrap();
    c.bench_function("homology/sd_torus7", |b| b.iter(|| homology(black_box(&chain)).unwrap()));

    let s3 = hasse(&corpus::boundary_of_simplex(4));
    c.bench_function("complete_matching/sphere3", |b| b.iter(|| complete_matching(black_box(&s3))));
}

criterion_group!(benches, bench_pipeline);
criterion_main!(benches);
