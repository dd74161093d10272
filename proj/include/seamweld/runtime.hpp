#pragma once

namespace seamweld::runtime {

/// Thread cap for the OpenMP kernels. Resolution order: set_max_threads()
/// override, SEAMWELD_THREADS env var, OpenMP default. Always >= 1.
int max_threads();

/// Override the cap for this process; 0 restores env/default resolution.
void set_max_threads(int n);

} // namespace seamweld::runtime
