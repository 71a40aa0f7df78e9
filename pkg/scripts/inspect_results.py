import duckdb

con = duckdb.connect("db/qpse.duckdb", read_only=True)

print("\nTables:")
print(con.execute("SHOW TABLES").df())

print("\nMost negative BBM margins:")
print(con.execute("""
SELECT family, label, points, s_r, s_k, bbm_margin
FROM bbm_sweep
ORDER BY bbm_margin
LIMIT 10
""").df())

print("\nLargest translation / boost deltas:")
print(con.execute("""
SELECT family, case_id, kind, amount, d_s_r, d_s_k
FROM frame_invariance
WHERE family <> 'dilation'
ORDER BY GREATEST(ABS(d_s_r), ABS(d_s_k)) DESC
LIMIT 10
""").df())

print("\nHarmonic series, first rows:")
print(con.execute("""
SELECT t, s_r, s_k, s_total
FROM entropy_series_harmonic
ORDER BY t
LIMIT 10
""").df())
