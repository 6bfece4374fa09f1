use std::time::Instant;
use ppv_core::algebra::ratfunc::RatFunc;
use ppv_core::algebra::scalar::ParamScalar;

fn main() {
    let t1 = RatFunc::param(0);
    let t2 = RatFunc::param(1);
    let x = RatFunc::x();
    let one = RatFunc::one();
    let u = &(&t1 / &x) + &(&(&t1 - &t2) / &(&x - &one));
    let r1 = &(&(&t1 - &t2) / &x) + &(&t2 / &(&x - &one));
    let t0 = Instant::now();
    let q = &u.dx() + &(&u * &u);
    println!("q built {:?}", t0.elapsed());
    let t0 = Instant::now();
    let r0 = &(&(&r1 * &r1) - &r1.dx()) - &q;
    println!("r0 built {:?}", t0.elapsed());
    let t0 = Instant::now();
    let dq = q.dx();
    println!("q.dx {:?}", t0.elapsed());
    let t0 = Instant::now();
    let dlq = &dq / &q;
    println!("dlq {:?} = den deg {}", t0.elapsed(), dlq.denom().degree().unwrap());
    let t0 = Instant::now();
    let p = &dlq * &dlq;
    println!("dlq^2 {:?} den deg {}", t0.elapsed(), p.denom().degree().unwrap());
    let t0 = Instant::now();
    let s = &(&p + &r0) * &(&dlq - &r1);
    println!("mix {:?} den {}", t0.elapsed(), s.denom().degree().unwrap());
    let _ = s;
    let t0 = Instant::now();
    let op = ppv_core::engine::third_order_operator(&r1, &r0, &q);
    println!("third order {:?} ok={}", t0.elapsed(), op.is_ok());
    let _ = ParamScalar::one();
}
