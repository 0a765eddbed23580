#ifndef CURVIREG_PARALLEL_HPP
#define CURVIREG_PARALLEL_HPP

#include <exception>

namespace curvireg {

/// Runs fn(0..n-1) across the worker pool; the first exception is captured
/// and rethrown after the loop, since anything escaping an OpenMP region
/// would terminate the process.
template <typename Fn>
void parallel_indexed(int n, Fn&& fn) {
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        try {
            fn(i);
        } catch (...) {
#pragma omp critical(curvireg_parallel_err)
            {
                if (!err)
                    err = std::current_exception();
            }
        }
    }
    if (err)
        std::rethrow_exception(err);
}

}  // namespace curvireg

#endif
