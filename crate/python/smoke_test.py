"""Quick check that the compiled module imports and agrees with itself.

Build and install first:  maturin develop -m crates/python/Cargo.toml
"""

import revpeb

BT3 = "2 1\n3 1\n4 2\n5 2\n6 3\n7 3\n"


def main():
    tree = revpeb.Graph.parse(BT3)
    assert tree.is_tree and len(tree) == 7 and tree.root == "1"

    sol = revpeb.solve(tree)
    assert sol.rev == 5, sol
    moves = sol.moves()
    assert len(moves) == sol.move_count
    space, time = revpeb.validate(tree, "\n".join(moves))
    assert (space, time) == (5, len(moves) + 1)

    rank, coloring = revpeb.erank(tree)
    assert rank == 4 and len(coloring) == 6

    assert revpeb.rev_oracle(tree) == 5
    assert revpeb.dt_value(tree) == 5
    assert revpeb.vrev_oracle(tree) in (4, 5)

    try:
        revpeb.validate(tree, "+1\n")
    except ValueError as e:
        assert "move 0" in str(e)
    else:
        raise AssertionError("illegal move accepted")

    try:
        revpeb.rev_oracle(revpeb.Graph.chain(40))
    except ValueError as e:
        assert "capped" in str(e)
    else:
        raise AssertionError("size cap not enforced")

    report = revpeb.generate("bt-eps", h=10, k=2)
    assert report["space"] <= 1.5 * 10 + 3, report
    chain = revpeb.generate("chain", n=64, moves=True)
    assert chain["space"] == 7 and len(chain["moves"]) == chain["time"] - 1

    big = revpeb.Graph.complete_binary_tree(12)
    print("rev(Bt_12) =", revpeb.solve(big).rev)
    print("ok")


if __name__ == "__main__":
    main()
