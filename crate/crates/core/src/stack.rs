//! Runs recursive tree work on a thread with a generous stack, so deeply
//! nested (but accepted) terms cannot exhaust the caller's stack.

const STACK_BYTES: usize = 256 * 1024 * 1024;

pub(crate) fn with_big_stack<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(STACK_BYTES)
            .spawn_scoped(scope, f)
            .expect("failed to spawn parser thread")
            .join()
            .unwrap_or_else(|payload| std::panic::resume_unwind(payload))
    })
}
