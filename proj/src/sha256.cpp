// Copyright 2026 The Kadupul Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kadupul/sha256.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace kadupul {

struct Sha256Stream::Ctx {
    EVP_MD_CTX* md = EVP_MD_CTX_new();
    Ctx()
    {
        if (md == nullptr || EVP_DigestInit_ex(md, EVP_sha256(), nullptr) != 1)
            throw std::runtime_error("SHA-256 context initialisation failed");
    }
    Ctx(const Ctx& other)
    {
        if (md == nullptr || EVP_MD_CTX_copy_ex(md, other.md) != 1)
            throw std::runtime_error("SHA-256 context copy failed");
    }
    Ctx& operator=(const Ctx&) = delete;
    ~Ctx() { EVP_MD_CTX_free(md); }
};

Block32 sha256(ByteSpan data)
{
    Block32 out;
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.bytes.data(), &len, EVP_sha256(), nullptr) != 1 || len != 32)
        throw std::runtime_error("SHA-256 digest failed");
    return out;
}

Block32 sha256(std::string_view text)
{
    return sha256(ByteSpan{reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

Sha256Stream::Sha256Stream() : ctx_(std::make_unique<Ctx>()) {}
Sha256Stream::~Sha256Stream() = default;
Sha256Stream::Sha256Stream(Sha256Stream&&) noexcept = default;
Sha256Stream& Sha256Stream::operator=(Sha256Stream&&) noexcept = default;

Sha256Stream::Sha256Stream(const Sha256Stream& other)
    : ctx_(std::make_unique<Ctx>(*other.ctx_)), finalized_(other.finalized_), absorbed_(other.absorbed_)
{
}

Sha256Stream& Sha256Stream::operator=(const Sha256Stream& other)
{
    if (this != &other) {
        ctx_ = std::make_unique<Ctx>(*other.ctx_);
        finalized_ = other.finalized_;
        absorbed_ = other.absorbed_;
    }
    return *this;
}

void Sha256Stream::update(ByteSpan chunk)
{
    if (finalized_) throw std::logic_error("hash update after finalize");
    if (chunk.empty()) return;
    if (EVP_DigestUpdate(ctx_->md, chunk.data(), chunk.size()) != 1)
        throw std::runtime_error("SHA-256 update failed");
    absorbed_ += chunk.size();
}

Block32 Sha256Stream::finalize()
{
    if (finalized_) throw std::logic_error("hash finalized twice");
    Block32 out;
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_->md, out.bytes.data(), &len) != 1 || len != 32)
        throw std::runtime_error("SHA-256 finalize failed");
    finalized_ = true;
    return out;
}

}  // namespace kadupul
