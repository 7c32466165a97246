"""
计算内核
精确连分数、透镜空间、枕形算术、Seifert 数据、族目录与表格校验
"""
