#include "hcdc/hash.hpp"

#include <memory>
#include <stdexcept>

#include <openssl/evp.h>

namespace hcdc {

namespace {

struct CtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};

EVP_MD_CTX* thread_ctx() {
  thread_local std::unique_ptr<EVP_MD_CTX, CtxDeleter> ctx(EVP_MD_CTX_new());
  return ctx.get();
}

void check(int ok, const char* what) {
  if (ok != 1) throw std::runtime_error(std::string("openssl: ") + what);
}

// Explicit fetches avoid a provider lookup on every init.
const EVP_MD* fetched(const char* name) {
  const EVP_MD* md = EVP_MD_fetch(nullptr, name, nullptr);
  if (md == nullptr) throw std::runtime_error(std::string("openssl: cannot fetch ") + name);
  return md;
}

const EVP_MD* shake_md() {
  static const EVP_MD* md = fetched("SHAKE256");
  return md;
}

const EVP_MD* sha256_md() {
  static const EVP_MD* md = fetched("SHA256");
  return md;
}

}  // namespace

void shake256(std::span<const std::uint8_t> input, std::span<std::uint8_t> out) {
  EVP_MD_CTX* ctx = thread_ctx();
  check(EVP_DigestInit_ex(ctx, shake_md(), nullptr), "shake256 init");
  check(EVP_DigestUpdate(ctx, input.data(), input.size()), "shake256 update");
  check(EVP_DigestFinalXOF(ctx, out.data(), out.size()), "shake256 final");
}

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> input) {
  Sha256 h;
  h.update(input);
  return h.finish();
}

Sha256::Sha256() : ctx_(EVP_MD_CTX_new()) {
  check(EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), sha256_md(), nullptr), "sha256 init");
}

Sha256::~Sha256() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

void Sha256::update(std::span<const std::uint8_t> data) {
  check(EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data.data(), data.size()), "sha256 update");
}

std::array<std::uint8_t, 32> Sha256::finish() {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  check(EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), out.data(), &len), "sha256 final");
  return out;
}

}  // namespace hcdc
