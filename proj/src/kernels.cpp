#include "exchlab/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace exchlab::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend pick_default() {
  if (const char* env = std::getenv("EXCHLAB_KERNELS")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && cpu_has_avx2()) return Backend::avx2;
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

const KernelTable* table_for(Backend b) {
  return b == Backend::avx2 ? &avx2_table() : &scalar_table();
}

Backend g_backend = pick_default();
const KernelTable* g_table = table_for(g_backend);

}  // namespace

bool backend_available(Backend b) {
  return b == Backend::scalar || cpu_has_avx2();
}

Backend active_backend() { return g_backend; }

void force_backend(Backend b) {
  if (!backend_available(b)) {
    throw std::invalid_argument("kernel backend not supported on this CPU: " +
                                std::string(backend_name(b)));
  }
  g_backend = b;
  g_table = table_for(b);
}

void reset_backend() {
  g_backend = pick_default();
  g_table = table_for(g_backend);
}

std::string_view backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

double sum(std::span<const double> x) { return g_table->sum(x.data(), x.size()); }

double sum_squares(std::span<const double> x) {
  return g_table->sum_squares(x.data(), x.size());
}

double sum_abs(std::span<const double> x) {
  return g_table->sum_abs(x.data(), x.size());
}

double max_abs(std::span<const double> x) {
  return g_table->max_abs(x.data(), x.size());
}

double paired_product_sum(std::span<const double> x) {
  return g_table->paired_product_sum(x.data(), x.size());
}

}  // namespace exchlab::kernels
