#include "rv32sc/alu.hpp"

#include "rv32sc/bits.hpp"

namespace rv32sc::alu {

std::string_view to_string(AluOp op) {
    switch (op) {
        case AluOp::Add: return "ADD";
        case AluOp::Sub: return "SUB";
        case AluOp::Sll: return "SLL";
        case AluOp::Srl: return "SRL";
        case AluOp::Sra: return "SRA";
        case AluOp::And: return "AND";
        case AluOp::Or: return "OR";
        case AluOp::Xor: return "XOR";
        case AluOp::Slt: return "SLT";
        case AluOp::Sltu: return "SLTU";
    }
    return "?";
}

namespace {

// Both adder paths go through the lookahead adder; subtraction is a + ~b + 1.
bits::AddResult add32(Word a, Word b, bool cin) {
    return bits::cla_add(bits::BitVec(a, 32), bits::BitVec(b, 32), cin);
}

Word shift_right_arith(Word a, unsigned amount) {
    Word out = a >> amount;
    if ((a & 0x80000000u) != 0 && amount != 0) {
        out |= ~(0xFFFFFFFFu >> amount);
    }
    return out;
}

}  // namespace

AluResult alu_exec(AluOp op, Word a, Word b) {
    const auto diff = add32(a, ~b, true);
    const Word d = diff.sum.value();
    const bool sign_a = (a >> 31) != 0;
    const bool sign_b = (b >> 31) != 0;
    const bool sign_d = (d >> 31) != 0;
    const bool overflow = (sign_a != sign_b) && (sign_d != sign_a);

    AluResult r;
    r.eq = d == 0;
    r.lt_unsigned = !diff.cout;  // borrow
    r.lt_signed = sign_d != overflow;

    const unsigned shamt = b & 0x1Fu;
    switch (op) {
        case AluOp::Add: r.value = add32(a, b, false).sum.value(); break;
        case AluOp::Sub: r.value = d; break;
        case AluOp::Sll: r.value = a << shamt; break;
        case AluOp::Srl: r.value = a >> shamt; break;
        case AluOp::Sra: r.value = shift_right_arith(a, shamt); break;
        case AluOp::And: r.value = a & b; break;
        case AluOp::Or: r.value = a | b; break;
        case AluOp::Xor: r.value = a ^ b; break;
        case AluOp::Slt: r.value = r.lt_signed ? 1u : 0u; break;
        case AluOp::Sltu: r.value = r.lt_unsigned ? 1u : 0u; break;
    }
    return r;
}

}  // namespace rv32sc::alu
