"""cwlab 测试套件。"""
