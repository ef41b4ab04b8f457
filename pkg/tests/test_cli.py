import io
import shutil

import pytest

from weilcert.cli import EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_OK, main
from weilcert.explicit_formula import builtin_certificate_paths


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def cert_file(tmp_path):
    src = builtin_certificate_paths()[0]
    dst = tmp_path / src.name
    shutil.copy(src, dst)
    return dst


def test_certify_good(cert_file):
    code, text = run("certify", str(cert_file))
    assert code == EXIT_OK and "Proven" in text


def test_certify_tampered(cert_file):
    lines = cert_file.read_text().splitlines()
    lines = [("claimed_bound -10" if line.startswith("claimed_bound") else line) for line in lines]
    cert_file.write_text("\n".join(lines) + "\n")
    code, text = run("certify", str(cert_file))
    assert code == EXIT_FAIL and "Refuted" in text


def test_certify_missing_file(tmp_path):
    code, text = run("certify", str(tmp_path / "nope.cert"))
    assert code == EXIT_FAIL and "error" in text


def test_certify_without_files_is_a_usage_error():
    with pytest.raises(SystemExit) as err:
        run("certify")
    assert err.value.code == 2


def test_certify_builtin_tsv():
    code, text = run("certify", "--builtin", "--format", "tsv")
    rows = [line.split("\t") for line in text.splitlines()]
    assert code == EXIT_OK and len(rows) == 10
    assert all(r[1] == "Proven" and float(r[3]) < 0 for r in rows)


def test_search_writes_a_certificate(tmp_path):
    target = tmp_path / "i11.cert"
    code, _ = run("search", "--param", "I11", "--mult", "2", "--known", "Delta11", "--grid", "5", "-o", str(target))
    assert code == EXIT_OK
    assert run("certify", str(target))[0] == EXIT_OK


def test_search_without_result():
    code, text = run("search", "--param", "I11", "--grid", "4")
    assert code == EXIT_INCONCLUSIVE and "no certificate" in text


def test_search_bad_param():
    with pytest.raises(SystemExit):
        run("search", "--param", "J11")


def test_enumerate_lists():
    code, text = run("enumerate", "--wmax", "4", "--ell", "2", "--list")
    assert code in (EXIT_OK, EXIT_INCONCLUSIVE)
    assert text.splitlines()[-1].startswith("count=")


def test_enumerate_bad_filter():
    with pytest.raises(SystemExit):
        run("enumerate", "--wmax", "4", "--ell", "2", "--filter", "sorted")


def test_classes():
    assert run("classes", "--group", "Sp16")[1].strip() == "Sp16 |P(G)/~| = 2521"
    code, text = run("classes", "--group", "SO3", "--list")
    assert code == EXIT_OK
    assert "class=phi1*phi3 e=1 order=3" in text


def test_classes_bad_group():
    with pytest.raises(SystemExit):
        run("classes", "--group", "Sp5")


def test_masses_so3():
    code, text = run("masses", "--group", "SO3", "--kmax", "5")
    assert code == EXIT_OK
    assert "class=phi1^3 e=1 mass=-1/12" in text
    assert "dim S_12 = 1" in text and "dim S_10 = 0" in text


def test_masses_from_targets(tmp_path):
    from weilcert.masses import dim_cusp_forms_oracle, dumps_targets, so3_spectral

    path = tmp_path / "so3.targets"
    path.write_text(dumps_targets(so3_spectral(8, dim_cusp_forms_oracle)))
    code, text = run("masses", "--group", "SO3", "--targets", str(path))
    assert code == EXIT_OK and "mass=1/3" in text
    path.write_text("lambda=0 t_ell=1/2\nlambda=0 t_ell=1/2\n")
    assert run("masses", "--group", "SO3", "--targets", str(path))[0] == EXIT_FAIL


def test_masses_need_targets():
    with pytest.raises(SystemExit):
        run("masses", "--group", "SO5")


def test_vanishing():
    code, text = run("vanishing", "--group", "SO3", "--wbound", "5")
    assert code == EXIT_OK and text.splitlines()[-1] == "SO3 w<=5 |Lambda_test| = 3"


def test_siegel_scalar():
    code, text = run("siegel", "--scalar", "--k", "13")
    assert code == EXIT_OK
    assert text.splitlines()[-1] == "rows=4"
    assert "psi=[25]+Delta11[12] g=24 k=13" in text


def test_siegel_vector_weight():
    code, text = run("siegel", "--weight", "11,11,7,7")
    assert "psi=Delta19_7[2]+[1] g=4 k=11,11,7,7" in text


def test_siegel_rejects_large_weight():
    assert run("siegel", "--weight", "14,10")[0] == EXIT_FAIL


def test_output_is_deterministic():
    assert run("siegel", "--kmax", "12") == run("siegel", "--kmax", "12")
