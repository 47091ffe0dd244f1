#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace phaselearn {

enum class Pauli : char { I = 'I', X = 'X', Y = 'Y', Z = 'Z' };

/// One Pauli operator per qubit; index 0 acts on qubit 0 (the least
/// significant bit of a basis index).
class PauliString {
public:
    PauliString() = default;
    explicit PauliString(std::vector<Pauli> ops) : ops_(std::move(ops)) {}

    /// Parses e.g. "IXZZ": leftmost letter acts on qubit 0.
    static PauliString from_string(const std::string& letters) {
        std::vector<Pauli> ops;
        ops.reserve(letters.size());
        for (char c : letters) {
            switch (c) {
                case 'I': ops.push_back(Pauli::I); break;
                case 'X': ops.push_back(Pauli::X); break;
                case 'Y': ops.push_back(Pauli::Y); break;
                case 'Z': ops.push_back(Pauli::Z); break;
                default:
                    throw std::invalid_argument(std::string("invalid Pauli letter '") + c + "'");
            }
        }
        return PauliString(std::move(ops));
    }

    /// Identity string on n qubits with single-site substitutions applied.
    static PauliString single(std::size_t n, std::size_t site, Pauli op) {
        std::vector<Pauli> ops(n, Pauli::I);
        ops.at(site) = op;
        return PauliString(std::move(ops));
    }

    static PauliString two_site(std::size_t n, std::size_t a, Pauli pa, std::size_t b, Pauli pb) {
        std::vector<Pauli> ops(n, Pauli::I);
        ops.at(a) = pa;
        ops.at(b) = pb;
        return PauliString(std::move(ops));
    }

    std::size_t size() const { return ops_.size(); }
    Pauli op(std::size_t qubit) const { return ops_[qubit]; }
    const std::vector<Pauli>& ops() const { return ops_; }

    std::string to_string() const {
        std::string s;
        s.reserve(ops_.size());
        for (Pauli p : ops_) s.push_back(static_cast<char>(p));
        return s;
    }

    /// Bit masks of the qubits carrying X/Y/Z factors, plus the Y count.
    struct Masks {
        std::uint64_t flip = 0;   // X or Y: flips the basis bit
        std::uint64_t phase = 0;  // Y or Z: contributes a (-1)^bit sign
        int y_count = 0;
    };

    Masks masks() const {
        Masks m;
        for (std::size_t q = 0; q < ops_.size(); ++q) {
            switch (ops_[q]) {
                case Pauli::I: break;
                case Pauli::X: m.flip |= std::uint64_t{1} << q; break;
                case Pauli::Y:
                    m.flip |= std::uint64_t{1} << q;
                    m.phase |= std::uint64_t{1} << q;
                    ++m.y_count;
                    break;
                case Pauli::Z: m.phase |= std::uint64_t{1} << q; break;
            }
        }
        return m;
    }

private:
    std::vector<Pauli> ops_;
};

} // namespace phaselearn
