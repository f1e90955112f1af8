import rospy
import smach


class UnlockArm(smach.State):
    """Release the arm brake so the joints accept new goals."""

    def __init__(self, robot, arm_designator):
        smach.State.__init__(self, outcomes=['unlocked'])
        self.robot = robot
        self.arm_designator = arm_designator

    def execute(self, userdata=None):
        arm = self.arm_designator.resolve()
        arm.release_brake()
        return 'unlocked'


class MoveToJointGoal(smach.State):
    """Move the arm to a named joint goal from the pose library."""

    def __init__(self, robot, arm_designator, goal_name):
        smach.State.__init__(self, outcomes=['arm_at_goal', 'goal_unreachable'])
        self.robot = robot
        self.arm_designator = arm_designator
        self.goal_name = goal_name

    def execute(self, userdata=None):
        arm = self.arm_designator.resolve()
        if not arm.send_joint_goal(self.goal_name):
            return 'goal_unreachable'
        arm.wait_for_motion_done()
        return 'arm_at_goal'
