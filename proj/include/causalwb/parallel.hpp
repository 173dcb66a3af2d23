#ifndef CAUSALWB_PARALLEL_HPP
#define CAUSALWB_PARALLEL_HPP

namespace causalwb {

/// Kernels with a data-parallel inner loop ship an OpenMP path and a serial
/// reference path; both must produce identical results.
enum class Execution { Serial, Parallel };

/// Worker count from CAUSALWB_WORKERS, else the OpenMP default.
int default_workers();

}  // namespace causalwb

#endif  // CAUSALWB_PARALLEL_HPP
