#ifndef DGMTRI_BIGINT_HPP
#define DGMTRI_BIGINT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dgmtri {

// Unsigned big integer, just large enough for exact state-space arithmetic.
// Clique state spaces are products of cardinalities (up to ~50^40), and graph
// weights are sums of such products; comparing them through doubles loses the
// exactness that the left/right parity and weight-dominance checks need.
class BigUint {
public:
    BigUint() = default;
    explicit BigUint(std::uint64_t v) {
        if (v != 0) {
            limbs_.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
            if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
        }
    }

    bool isZero() const { return limbs_.empty(); }

    void mulSmall(std::uint64_t m) {
        if (m == 0 || limbs_.empty()) {
            limbs_.clear();
            return;
        }
        if (m >> 32) {
            // split the multiplier; value*(hi<<32) is value*hi shifted one limb
            BigUint hiPart = *this;
            hiPart.mulWord(static_cast<std::uint32_t>(m >> 32));
            hiPart.limbs_.insert(hiPart.limbs_.begin(), 0);
            mulWord(static_cast<std::uint32_t>(m & 0xffffffffu));
            add(hiPart);
            return;
        }
        mulWord(static_cast<std::uint32_t>(m));
    }

    void add(const BigUint& other) {
        std::size_t n = std::max(limbs_.size(), other.limbs_.size());
        limbs_.resize(n, 0);
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t sum = carry + limbs_[i] +
                                (i < other.limbs_.size() ? other.limbs_[i] : 0u);
            limbs_[i] = static_cast<std::uint32_t>(sum & 0xffffffffu);
            carry = sum >> 32;
        }
        if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
    }

    // this -= other; other must not exceed this
    void sub(const BigUint& other) {
        if (compare(other) < 0) throw std::underflow_error("BigUint::sub underflow");
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            std::int64_t cur = static_cast<std::int64_t>(limbs_[i]) - borrow -
                               (i < other.limbs_.size() ? other.limbs_[i] : 0u);
            if (cur < 0) {
                cur += (1ll << 32);
                borrow = 1;
            } else {
                borrow = 0;
            }
            limbs_[i] = static_cast<std::uint32_t>(cur);
        }
        trim();
    }

    // -1, 0, 1
    int compare(const BigUint& other) const {
        if (limbs_.size() != other.limbs_.size())
            return limbs_.size() < other.limbs_.size() ? -1 : 1;
        for (std::size_t i = limbs_.size(); i-- > 0;) {
            if (limbs_[i] != other.limbs_[i]) return limbs_[i] < other.limbs_[i] ? -1 : 1;
        }
        return 0;
    }

    bool operator<(const BigUint& o) const { return compare(o) < 0; }
    bool operator==(const BigUint& o) const { return compare(o) == 0; }

    double log10() const {
        if (limbs_.empty()) return -std::numeric_limits<double>::infinity();
        // top ~96 bits give plenty of precision for reporting
        std::size_t top = limbs_.size() - 1;
        double mant = limbs_[top];
        std::size_t used = 1;
        while (used < 3 && used <= top) {
            mant = mant * 4294967296.0 + limbs_[top - used];
            ++used;
        }
        double droppedBits = static_cast<double>(top + 1 - used) * 32.0;
        return std::log10(mant) + droppedBits * 0.30102999566398119521;
    }

    std::string toString() const {
        if (limbs_.empty()) return "0";
        std::vector<std::uint32_t> work = limbs_;
        std::string digits;
        while (!work.empty()) {
            std::uint64_t rem = 0;
            for (std::size_t i = work.size(); i-- > 0;) {
                std::uint64_t cur = (rem << 32) | work[i];
                work[i] = static_cast<std::uint32_t>(cur / 10);
                rem = cur % 10;
            }
            digits.push_back(static_cast<char>('0' + rem));
            while (!work.empty() && work.back() == 0) work.pop_back();
        }
        return std::string(digits.rbegin(), digits.rend());
    }

private:
    void mulWord(std::uint32_t m) {
        if (m == 0) {
            limbs_.clear();
            return;
        }
        std::uint64_t carry = 0;
        for (auto& limb : limbs_) {
            std::uint64_t prod = static_cast<std::uint64_t>(limb) * m + carry;
            limb = static_cast<std::uint32_t>(prod & 0xffffffffu);
            carry = prod >> 32;
        }
        if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
        trim();
    }

    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    }

    std::vector<std::uint32_t> limbs_;
};

} // namespace dgmtri

#endif
