use std::time::Instant;
fn main() {
    let ins = stress_sched::instance::generate(&stress_sched::instance::desk_spec(2)).unwrap();
    let (em, im) = stress_sched::nfn::train_default_assessors(12, 5);
    let sched = {
        // naive roster: everyone works 9..17
        let mut s = stress_sched::schedule::Schedule::rest(ins.m(), ins.horizon_days());
        for i in 0..ins.m() {
            let job = stress_sched::instance::JobType { category: i % 2, class: usize::from(i % 3 == 2) };
            for d in 0..7 { for h in 9..17 { s.set(i, d, h, stress_sched::schedule::Assignment::Job(job)); } }
        }
        s
    };
    for (name, mode) in [("emotional", stress_sched::sim::EvalMode::Emotional), ("frozen", stress_sched::sim::EvalMode::Frozen)] {
        let ctx = stress_sched::sim::SimContext::new(&ins, &em, &im, 7, mode).unwrap();
        let t0 = Instant::now();
        let mut acc = 0.0;
        let n = 200;
        for _ in 0..n { acc += ctx.evaluate(&sched).f; }
        let dt = t0.elapsed();
        println!("{name}: {:?} per eval (f={})", dt / n, acc / n as f64);
    }
}
