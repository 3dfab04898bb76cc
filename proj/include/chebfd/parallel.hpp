#pragma once

#include <algorithm>
#include <cstdlib>

#include "chebfd/scalar.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace chebfd {

// Kernels are parallelized over contiguous row chunks with static
// assignment.  Partial reductions are always combined in chunk order, so
// results are bitwise reproducible for a fixed chunk count.

inline int& thread_count_ref() {
    static int n = [] {
        if (const char* env = std::getenv("CHEBFD_THREADS")) {
            int v = std::atoi(env);
            if (v > 0) return v;
        }
#ifdef _OPENMP
        return omp_get_max_threads();
#else
        return 1;
#endif
    }();
    return n;
}

inline int num_threads() { return thread_count_ref(); }
inline void set_num_threads(int n) { thread_count_ref() = std::max(1, n); }

struct RowChunks {
    Index rows;
    int count;

    explicit RowChunks(Index rows_) : rows(rows_), count(num_threads()) {
        count = static_cast<int>(std::min<Index>(count, std::max<Index>(rows, 1)));
    }
    Index begin(int c) const { return rows * c / count; }
    Index end(int c) const { return rows * (c + 1) / count; }
};

// f(chunk_index, row_begin, row_end); chunks may run concurrently.
template <class F>
void for_each_chunk(const RowChunks& chunks, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(chunks.count)
#endif
    for (int c = 0; c < chunks.count; ++c) f(c, chunks.begin(c), chunks.end(c));
}

}  // namespace chebfd
